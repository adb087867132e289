#pragma once

// Overlapping groups, handled two equivalent ways: materialize one copy of an
// example per group it belongs to, or keep one copy and give it the summed
// per-group weight.

#include <cstddef>
#include <span>
#include <vector>

#include "robustboost/perturbation.hpp"

namespace robustboost {

struct CopyOrigin {
  std::size_t example = 0;
  std::size_t group = 0;
  friend bool operator==(const CopyOrigin&, const CopyOrigin&) = default;
};

/// origin[c] is the (original example, group) pair that copy c stands for.
struct ReductionMap {
  std::vector<CopyOrigin> origin;
};

struct DisjointReduction {
  GroupedDataset dataset;
  ReductionMap map;
};

/// One copy per (example, group) membership, emitted in (example, ascending
/// group) order. Each copy keeps x, y and U(x) and carries a single group.
DisjointReduction to_disjoint(const GroupedDataset& d);

/// p_i = sum over groups j containing example i of P_j / |G_j|.
std::vector<double> overlap_weights(const GroupedDataset& d,
                                    std::span<const double> group_weights);

}  // namespace robustboost
