#pragma once

// Hedge over groups. Each round splits the group weights evenly inside each
// group, runs the perturbation-level boosting loop with those sample weights
// and moves weight toward the groups its majority vote served worst.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "robustboost/ensemble.hpp"
#include "robustboost/inner_boost.hpp"
#include "robustboost/metrics.hpp"
#include "robustboost/perturbation.hpp"

namespace robustboost {

struct GroupWeights {
  std::vector<double> p;

  static GroupWeights uniform(std::size_t g);
  std::size_t size() const { return p.size(); }
  double sum() const;
};

struct OuterConfig {
  std::size_t rounds = 1;
  double delta = 0.5;
  std::size_t inner_rounds = 1;
  double inner_eta = 0.5;

  /// T = ceil(9 ln g / eps^2), T' = ceil(36 ln k / eps^2),
  /// delta = min(1/2, sqrt(ln g / T)) and inner eta = default_eta(k, T').
  /// Degenerate g = 1 or k = 1 fall back to one round and 1/2.
  static OuterConfig from_epsilon(double epsilon, std::size_t g, std::size_t k);

  void validate() const;
};

struct MultiRobustReport {
  std::vector<double> per_group_avg_loss;
  std::vector<double> per_group_maj_loss;
  std::optional<double> opt_max;
};

struct OuterRound {
  std::size_t round = 0;
  /// P^t, the weights the round was run with.
  const GroupWeights& weights;
  std::span<const double> sample_weights;
  const Ensemble& hypothesis;
  /// l_j^rob(h_t) per group.
  std::span<const double> group_losses;
  /// m_j = 1 - l_j^rob(h_t), clamped to [0, 1].
  std::span<const double> rewards;
};

using OuterObserver = std::function<void(const OuterRound&)>;

struct OuterResult {
  NestedEnsemble ensemble;
  MultiRobustReport report;
  std::vector<GroupWeights> weight_history;       // P^1..P^T
  std::vector<std::vector<double>> loss_history;  // l^rob(h_t) per round
  std::vector<std::vector<double>> reward_history;
};

/// Requires disjoint groups; see group_boost_overlapping otherwise.
OuterResult group_boost(const GroupedDataset& d, const OuterConfig& cfg,
                        const ErmOracle& oracle,
                        const OuterObserver& observer = {},
                        const InnerObserver& inner_observer = {});

/// Same loop on overlapping groups with p_i = sum_{j: i in G_j} P_j / |G_j|.
OuterResult group_boost_overlapping(const GroupedDataset& d,
                                    const OuterConfig& cfg,
                                    const ErmOracle& oracle,
                                    const OuterObserver& observer = {},
                                    const InnerObserver& inner_observer = {});

/// P'_j = P_j (1 - delta m_j) / Z.
GroupWeights hedge_update(const GroupWeights& weights,
                          std::span<const double> rewards, double delta);

/// (1/|G_j|) sum_{i in G_j} max_{z in U(x_i)} 1[h(z) != y_i].
template <typename Predictor>
double group_robust_loss(const Predictor& h, const GroupedDataset& d,
                         std::size_t j) {
  if (j >= d.g || d.group_size(j) == 0) {
    throw Error("group_robust_loss: empty or unknown group");
  }
  return robust_loss(h, d).per_group[j];
}

struct HedgeRegret {
  double algorithm_cost = 0.0;  // sum_t m_t . P_t
  double bound = 0.0;           // (1 + delta) min_j sum_t m_tj + ln g / delta
  bool holds() const { return algorithm_cost <= bound + 1e-12; }
};

HedgeRegret hedge_regret(std::span<const GroupWeights> weights,
                         std::span<const std::vector<double>> rewards,
                         double delta);

bool hedge_regret_check(std::span<const GroupWeights> weights,
                        std::span<const std::vector<double>> rewards,
                        double delta);

/// round, P^t (g columns), l_j(h_t) (g columns), running averages (g columns).
void write_outer_trace_csv(std::ostream& os, const OuterResult& result);

}  // namespace robustboost
