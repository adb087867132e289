#include "robustboost/groups.hpp"

#include <string>

namespace robustboost {

DisjointReduction to_disjoint(const GroupedDataset& d) {
  require_valid(d);
  DisjointReduction out;
  out.dataset.g = d.g;
  out.dataset.k = d.k;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& e = d.examples[i];
    for (std::size_t j : e.groups) {
      LabeledExample copy{e.x, e.y, e.u, {j}};
      out.dataset.examples.push_back(std::move(copy));
      out.map.origin.push_back({i, j});
    }
  }
  return out;
}

std::vector<double> overlap_weights(const GroupedDataset& d,
                                    std::span<const double> group_weights) {
  if (group_weights.size() != d.g) {
    throw Error("overlap_weights: one group weight per group required");
  }
  std::vector<std::size_t> sizes(d.g, 0);
  for (const auto& e : d.examples) {
    for (std::size_t j : e.groups) ++sizes[j];
  }
  for (std::size_t j = 0; j < d.g; ++j) {
    if (sizes[j] == 0) throw Error("empty group " + std::to_string(j));
  }
  std::vector<double> p(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j : d.examples[i].groups) {
      p[i] += group_weights[j] / static_cast<double>(sizes[j]);
    }
  }
  return p;
}

}  // namespace robustboost
