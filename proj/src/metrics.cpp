#include "robustboost/metrics.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace robustboost {

Label majority_predict(const Ensemble& e, const Point& z) {
  if (e.empty()) throw Error("majority vote over an empty ensemble");
  std::size_t positive = 0;
  for (const auto& h : e.hypotheses) {
    if (predict(h, z) == Label::Positive) ++positive;
  }
  return majority_label(positive, e.size());
}

Label majority_predict(const NestedEnsemble& e, const Point& z) {
  if (e.empty()) throw Error("majority vote over an empty ensemble");
  std::size_t positive = 0;
  for (const auto& member : e.members) {
    if (majority_predict(member, z) == Label::Positive) ++positive;
  }
  return majority_label(positive, e.size());
}

kernels::PredictionMatrix prediction_matrix(std::span<const Hypothesis> hs,
                                            const GroupedDataset& d) {
  kernels::PredictionMatrix pm(hs.size(), d.variant_count());
  for (std::size_t r = 0; r < hs.size(); ++r) {
    std::size_t c = 0;
    for (const auto& e : d.examples) {
      for (const auto& z : e.u) {
        pm.at(r, c++) = static_cast<std::int8_t>(to_int(predict(hs[r], z)));
      }
    }
  }
  return pm;
}

kernels::ColumnLayout column_layout(const GroupedDataset& d) {
  kernels::ColumnLayout layout;
  layout.groups = d.g;
  layout.offsets.reserve(d.size() + 1);
  layout.offsets.push_back(0);
  for (const auto& e : d.examples) {
    layout.offsets.push_back(layout.offsets.back() + e.u.size());
    layout.labels.push_back(static_cast<std::int8_t>(to_int(e.y)));
    layout.group_of.push_back(e.groups.empty() ? 0 : e.groups.front());
  }
  return layout;
}

std::vector<std::int8_t> flat_predictions(const Hypothesis& h,
                                          const GroupedDataset& d) {
  return prediction_matrix(std::span<const Hypothesis>(&h, 1), d).values;
}

namespace {

std::vector<std::int8_t> votes_to_labels(std::span<const std::size_t> votes,
                                         std::size_t total) {
  std::vector<std::int8_t> out(votes.size());
  for (std::size_t c = 0; c < votes.size(); ++c) {
    out[c] = static_cast<std::int8_t>(to_int(majority_label(votes[c], total)));
  }
  return out;
}

}  // namespace

std::vector<std::int8_t> flat_predictions(const Ensemble& e,
                                          const GroupedDataset& d) {
  if (e.empty()) throw Error("majority vote over an empty ensemble");
  const auto pm = prediction_matrix(e.hypotheses, d);
  std::vector<std::size_t> votes(pm.cols);
  kernels::positive_votes(pm, votes);
  return votes_to_labels(votes, e.size());
}

std::vector<std::int8_t> flat_predictions(const NestedEnsemble& e,
                                          const GroupedDataset& d) {
  if (e.empty()) throw Error("majority vote over an empty ensemble");
  kernels::PredictionMatrix pm(e.size(), d.variant_count());
  for (std::size_t r = 0; r < e.size(); ++r) {
    const auto row = flat_predictions(e.members[r], d);
    std::copy(row.begin(), row.end(), pm.values.begin() + r * pm.cols);
  }
  std::vector<std::size_t> votes(pm.cols);
  kernels::positive_votes(pm, votes);
  return votes_to_labels(votes, e.size());
}

RobustLossSummary robust_loss(std::span<const std::int8_t> predictions,
                              const GroupedDataset& d) {
  if (predictions.size() != d.variant_count()) {
    throw Error("prediction count does not match the dataset");
  }
  RobustLossSummary s;
  s.per_example_mistake.resize(d.size(), false);
  std::vector<std::size_t> group_mistakes(d.g, 0);
  std::vector<std::size_t> group_members(d.g, 0);
  std::size_t mistakes = 0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& e = d.examples[i];
    const auto y = static_cast<std::int8_t>(to_int(e.y));
    bool wrong = false;
    for (std::size_t v = 0; v < e.u.size(); ++v, ++c) {
      if (predictions[c] != y) wrong = true;
    }
    s.per_example_mistake[i] = wrong;
    if (wrong) ++mistakes;
    for (std::size_t j : e.groups) {
      ++group_members[j];
      if (wrong) ++group_mistakes[j];
    }
  }
  s.overall = d.size() == 0 ? 0.0
                            : static_cast<double>(mistakes) /
                                  static_cast<double>(d.size());
  s.per_group.resize(d.g, 0.0);
  for (std::size_t j = 0; j < d.g; ++j) {
    if (group_members[j] > 0) {
      s.per_group[j] = static_cast<double>(group_mistakes[j]) /
                       static_cast<double>(group_members[j]);
    }
  }
  return s;
}

std::vector<double> mixed_example_losses(const Ensemble& e,
                                         const GroupedDataset& d) {
  if (e.empty()) throw Error("mixed loss of an empty ensemble");
  const auto pm = prediction_matrix(e.hypotheses, d);
  std::vector<std::size_t> votes(pm.cols);
  kernels::positive_votes(pm, votes);
  const double t = static_cast<double>(e.size());
  std::vector<double> out(d.size(), 0.0);
  std::size_t c = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& ex = d.examples[i];
    std::size_t worst = 0;
    for (std::size_t v = 0; v < ex.u.size(); ++v, ++c) {
      const std::size_t wrong =
          ex.y == Label::Positive ? e.size() - votes[c] : votes[c];
      worst = std::max(worst, wrong);
    }
    out[i] = static_cast<double>(worst) / t;
  }
  return out;
}

double mixed_robust_loss(const Ensemble& e, const GroupedDataset& d) {
  const auto per_example = mixed_example_losses(e, d);
  double sum = 0.0;
  for (double v : per_example) sum += v;
  return per_example.empty() ? 0.0
                             : sum / static_cast<double>(per_example.size());
}

double mixed_robust_loss(const Ensemble& e, const GroupedDataset& d,
                         std::span<const double> sample_weights) {
  if (sample_weights.size() != d.size()) {
    throw Error("sample weight count does not match the dataset");
  }
  const auto per_example = mixed_example_losses(e, d);
  double sum = 0.0;
  for (std::size_t i = 0; i < per_example.size(); ++i) {
    sum += sample_weights[i] * per_example[i];
  }
  return sum;
}

namespace {

void check_guard(const GroupedDataset& d, std::size_t class_size) {
  if (class_size == 0) throw Error("brute force over an empty class");
  const double work = static_cast<double>(class_size) *
                      static_cast<double>(d.size()) * static_cast<double>(d.k);
  if (work > static_cast<double>(kBruteForceGuard)) {
    throw GuardExceeded("brute-force guard exceeded: |class|*m*k = " +
                        std::to_string(static_cast<long long>(work)) + " > " +
                        std::to_string(kBruteForceGuard));
  }
}

}  // namespace

OptResult brute_force_opt(const GroupedDataset& d,
                          std::span<const Hypothesis> hypotheses) {
  check_guard(d, hypotheses.size());
  const auto pm = prediction_matrix(hypotheses, d);
  auto layout = column_layout(d);
  layout.groups = 1;
  std::fill(layout.group_of.begin(), layout.group_of.end(), std::size_t{0});
  std::vector<std::size_t> counts(hypotheses.size());
  kernels::group_robust_errors(pm, layout, counts);
  const auto best = std::min_element(counts.begin(), counts.end());
  return {static_cast<double>(*best) / static_cast<double>(d.size()),
          static_cast<std::size_t>(best - counts.begin())};
}

OptResult brute_force_opt_max(const GroupedDataset& d,
                              std::span<const Hypothesis> hypotheses) {
  if (!is_disjoint(d)) {
    throw Error("brute_force_opt_max needs disjoint groups; reduce with "
                "to_disjoint first");
  }
  check_guard(d, hypotheses.size());
  std::vector<std::size_t> sizes(d.g, 0);
  for (const auto& e : d.examples) ++sizes[e.groups.front()];
  for (std::size_t j = 0; j < d.g; ++j) {
    if (sizes[j] == 0) throw Error("empty group " + std::to_string(j));
  }
  const auto pm = prediction_matrix(hypotheses, d);
  const auto layout = column_layout(d);
  std::vector<std::size_t> counts(hypotheses.size() * d.g);
  kernels::group_robust_errors(pm, layout, counts);

  OptResult best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    double worst = 0.0;
    for (std::size_t j = 0; j < d.g; ++j) {
      worst = std::max(worst, static_cast<double>(counts[h * d.g + j]) /
                                  static_cast<double>(sizes[j]));
    }
    if (worst < best.value) best = {worst, h};
  }
  return best;
}

}  // namespace robustboost
