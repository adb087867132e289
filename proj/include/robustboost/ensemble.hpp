#pragma once

#include <vector>

#include "robustboost/hypothesis.hpp"

namespace robustboost {

/// Hypotheses in round order. Predicts by strict majority; an exact
/// half/half split predicts -1.
struct Ensemble {
  std::vector<Hypothesis> hypotheses;

  std::size_t size() const { return hypotheses.size(); }
  bool empty() const { return hypotheses.empty(); }
};

/// Majority vote over majority votes; what the group-level loop returns.
struct NestedEnsemble {
  std::vector<Ensemble> members;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

/// +1 iff strictly more than half the votes are +1.
inline Label majority_label(std::size_t positive_votes, std::size_t total) {
  return 2 * positive_votes > total ? Label::Positive : Label::Negative;
}

Label majority_predict(const Ensemble& e, const Point& z);
Label majority_predict(const NestedEnsemble& e, const Point& z);

inline Label predict(const Ensemble& e, const Point& z) {
  return majority_predict(e, z);
}
inline Label predict(const NestedEnsemble& e, const Point& z) {
  return majority_predict(e, z);
}

}  // namespace robustboost
