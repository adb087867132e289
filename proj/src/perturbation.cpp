#include "robustboost/perturbation.hpp"

#include <algorithm>

namespace robustboost {

std::size_t GroupedDataset::group_size(std::size_t j) const {
  std::size_t n = 0;
  for (const auto& e : examples) {
    if (std::find(e.groups.begin(), e.groups.end(), j) != e.groups.end()) ++n;
  }
  return n;
}

std::vector<std::size_t> GroupedDataset::group_members(std::size_t j) const {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& gs = examples[i].groups;
    if (std::find(gs.begin(), gs.end(), j) != gs.end()) members.push_back(i);
  }
  return members;
}

std::size_t GroupedDataset::variant_count() const {
  std::size_t n = 0;
  for (const auto& e : examples) n += e.u.size();
  return n;
}

bool is_disjoint(const GroupedDataset& d) {
  return std::all_of(d.examples.begin(), d.examples.end(),
                     [](const LabeledExample& e) { return e.groups.size() == 1; });
}

std::optional<Violation> validate(const GroupedDataset& d) {
  if (d.examples.empty()) return Violation{"dataset has no examples", 0};
  if (d.g == 0) return Violation{"group count is zero", 0};

  std::size_t max_u = 0;
  std::vector<std::size_t> members(d.g, 0);
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    const auto& e = d.examples[i];
    if (e.u.empty()) {
      return Violation{"empty U(x) at " + std::to_string(i), i};
    }
    if (e.u.size() > d.k) {
      return Violation{"|U(x)| exceeds k at " + std::to_string(i), i};
    }
    for (const auto& z : e.u) {
      if (z.dim() != e.x.dim()) {
        return Violation{"variant dimension differs from x at " +
                             std::to_string(i),
                         i};
      }
    }
    if (e.groups.empty()) {
      return Violation{"example without a group at " + std::to_string(i), i};
    }
    for (std::size_t p = 0; p < e.groups.size(); ++p) {
      if (e.groups[p] >= d.g) {
        return Violation{"group index out of range at " + std::to_string(i), i};
      }
      if (p > 0 && e.groups[p] <= e.groups[p - 1]) {
        return Violation{"group list not strictly ascending at " +
                             std::to_string(i),
                         i};
      }
      ++members[e.groups[p]];
    }
    max_u = std::max(max_u, e.u.size());
  }
  for (std::size_t j = 0; j < d.g; ++j) {
    if (members[j] == 0) {
      return Violation{"empty group " + std::to_string(j), j};
    }
  }
  if (d.k != max_u) {
    return Violation{"k differs from the largest |U(x)|", 0};
  }
  return std::nullopt;
}

void require_valid(const GroupedDataset& d) {
  if (auto v = validate(d)) throw Error("invalid dataset: " + v->message);
}

}  // namespace robustboost
