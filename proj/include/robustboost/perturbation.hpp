#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robustboost/hypothesis.hpp"

namespace robustboost {

/// The enumerated perturbation set U(x). It contains x only if the generator
/// put it there.
using PerturbationSet = std::vector<Point>;

struct LabeledExample {
  Point x;
  Label y = Label::Positive;
  PerturbationSet u;
  /// Group indices this example belongs to, ascending, no repeats.
  std::vector<std::size_t> groups;
};

struct GroupedDataset {
  std::vector<LabeledExample> examples;
  std::size_t g = 1;
  std::size_t k = 1;

  std::size_t size() const { return examples.size(); }
  /// Number of examples carrying group j.
  std::size_t group_size(std::size_t j) const;
  /// Indices of the examples carrying group j.
  std::vector<std::size_t> group_members(std::size_t j) const;
  /// Total number of (example, variant) points.
  std::size_t variant_count() const;
};

bool is_disjoint(const GroupedDataset& d);

struct Violation {
  std::string message;
  std::size_t index = 0;
};

/// First violated invariant, or nullopt when the dataset is valid.
std::optional<Violation> validate(const GroupedDataset& d);

/// Throws Error carrying the violation message if validate() fails.
void require_valid(const GroupedDataset& d);

}  // namespace robustboost
