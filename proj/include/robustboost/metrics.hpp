#pragma once

// Robust-loss metrics and the brute-force optimality oracles that serve as
// ground truth for the boosting loops.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "robustboost/ensemble.hpp"
#include "robustboost/kernels.hpp"
#include "robustboost/perturbation.hpp"

namespace robustboost {

/// Raised when a brute-force scan would exceed its size guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Largest |class| * m * k the brute-force oracles accept.
inline constexpr std::size_t kBruteForceGuard = 10'000'000;

struct RobustLossSummary {
  double overall = 0.0;
  std::vector<double> per_group;
  std::vector<bool> per_example_mistake;
};

/// Predictions of h on every (example, variant) point, flattened in dataset
/// order, as +1 / -1.
std::vector<std::int8_t> flat_predictions(const Hypothesis& h,
                                          const GroupedDataset& d);
std::vector<std::int8_t> flat_predictions(const Ensemble& e,
                                          const GroupedDataset& d);
std::vector<std::int8_t> flat_predictions(const NestedEnsemble& e,
                                          const GroupedDataset& d);

/// One row per hypothesis over the flattened points.
kernels::PredictionMatrix prediction_matrix(std::span<const Hypothesis> hs,
                                            const GroupedDataset& d);

/// Column layout of a dataset. Groups are taken from each example's first
/// group, so the layout is only meaningful per group for disjoint datasets.
kernels::ColumnLayout column_layout(const GroupedDataset& d);

/// Robust loss from flattened predictions.
RobustLossSummary robust_loss(std::span<const std::int8_t> predictions,
                              const GroupedDataset& d);

template <typename Predictor>
  requires(!std::convertible_to<const Predictor&, std::span<const std::int8_t>>)
RobustLossSummary robust_loss(const Predictor& h, const GroupedDataset& d) {
  const auto preds = flat_predictions(h, d);
  return robust_loss(std::span<const std::int8_t>(preds), d);
}

/// (1/m) sum_i max_{z in U(x_i)} (1/T) sum_t 1[h_t(z) != y_i].
double mixed_robust_loss(const Ensemble& e, const GroupedDataset& d);

/// sum_i p_i max_{z in U(x_i)} (1/T) sum_t 1[h_t(z) != y_i].
double mixed_robust_loss(const Ensemble& e, const GroupedDataset& d,
                         std::span<const double> sample_weights);

/// Per-example worst-variant mistake rate of the uniform mixture.
std::vector<double> mixed_example_losses(const Ensemble& e,
                                         const GroupedDataset& d);

struct OptResult {
  double value = 0.0;
  std::size_t index = 0;
};

/// Minimum empirical robust loss over the class, first attaining index.
OptResult brute_force_opt(const GroupedDataset& d,
                          std::span<const Hypothesis> hypotheses);

/// Minimum over the class of the worst per-group robust loss. Requires
/// disjoint groups.
OptResult brute_force_opt_max(const GroupedDataset& d,
                              std::span<const Hypothesis> hypotheses);

}  // namespace robustboost
