#pragma once

// Seeded instance generators. Every generator is a pure function of its
// parameters; equal inputs give equal instances.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "robustboost/hypothesis.hpp"
#include "robustboost/perturbation.hpp"

namespace robustboost::datagen {

struct Metadata {
  std::string generator;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
};

struct Instance {
  GroupedDataset dataset;
  std::vector<Hypothesis> hypotheses;
  Metadata meta;
};

/// The line construction where ERM on the augmented set is off by a factor
/// of n - 1. n positives at +1, n negatives at -1, k variants each. U(x)
/// holds only the listed variants unless include_x is set. The companion
/// class is every threshold at a midpoint of {-1, -0.75, 0, 0.75, 1} plus one
/// below and one above, both orientations, ordered by (tau, orientation).
Instance gen_example1(std::size_t n, std::size_t k, bool include_x = false);

/// Random finite instance on a 4x4 integer grid. Labels follow a hidden
/// table with 15% label noise; with probability 1/2 (per seed) the instance
/// is planted instead: no noise, variants keep the hidden label and the
/// hidden table joins the class. Groups are assigned round-robin.
Instance gen_random(std::size_t m, std::size_t k, std::size_t g,
                    std::size_t class_size, std::uint64_t seed,
                    bool include_x = true);

/// Two groups (40 and 10 examples, k = 3) where the member with the best
/// overall robust loss concentrates its mistakes on the small group and the
/// best worst-group member is a different table.
Instance gen_two_group_adversarial(std::uint64_t seed);

/// side x side binary grids. U(x) is every placement of a mask x mask zero
/// block, so k = (side - mask + 1)^2. Labels: +1 iff more than half the cells
/// are set. The class tabulates every "cell sum >= s" rule over the variant
/// universe plus a few random tables.
Instance gen_masked_grid(std::size_t side, std::size_t patch, std::size_t mask,
                         std::uint64_t seed, std::size_t count = 16);

/// True iff every patch x patch placement lies inside some mask x mask
/// placement on a side x side grid.
bool masks_cover_patches(std::size_t side, std::size_t patch, std::size_t mask);

/// A distribution with finite support: atom a is drawn with probability
/// probs[a]. Population robust loss is computed exactly.
struct FinitePopulation {
  std::vector<LabeledExample> atoms;
  std::vector<double> probs;

  /// m i.i.d. draws as a single-group dataset.
  GroupedDataset sample(std::size_t m, std::uint64_t seed) const;

  template <typename Predictor>
  double robust_loss(const Predictor& h) const {
    double loss = 0.0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      for (const auto& z : atoms[a].u) {
        if (predict(h, z) != atoms[a].y) {
          loss += probs[a];
          break;
        }
      }
    }
    return loss;
  }
};

/// Fixed 1-D population: 24 atoms on the integers with a noisy threshold
/// labelling and U(x) = {x - 1, x, x + 1}.
FinitePopulation line_population();

}  // namespace robustboost::datagen
