#include "robustboost/outer_boost.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "robustboost/groups.hpp"

namespace robustboost {

GroupWeights GroupWeights::uniform(std::size_t g) {
  if (g == 0) throw Error("group weights need at least one group");
  return {std::vector<double>(g, 1.0 / static_cast<double>(g))};
}

double GroupWeights::sum() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

OuterConfig OuterConfig::from_epsilon(double epsilon, std::size_t g,
                                      std::size_t k) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  const double eps2 = epsilon * epsilon;
  OuterConfig cfg;
  const double lng = std::log(static_cast<double>(g));
  const double lnk = std::log(static_cast<double>(k));
  cfg.rounds = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(9.0 * lng / eps2)));
  cfg.inner_rounds = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(36.0 * lnk / eps2)));
  cfg.delta = g > 1 ? std::min(0.5, std::sqrt(lng / static_cast<double>(cfg.rounds)))
                    : 0.5;
  cfg.inner_eta = k > 1 ? default_eta(k, cfg.inner_rounds) : 0.5;
  return cfg;
}

void OuterConfig::validate() const {
  if (rounds == 0) throw Error("outer config: rounds must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error("outer config: delta must lie in (0, 1)");
  }
  if (inner_rounds == 0) throw Error("outer config: inner rounds must be positive");
  if (!(inner_eta > 0.0 && inner_eta <= 0.5)) {
    throw Error("outer config: inner eta must lie in (0, 1/2]");
  }
}

GroupWeights hedge_update(const GroupWeights& weights,
                          std::span<const double> rewards, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error("hedge_update: delta must lie in (0, 1)");
  }
  if (rewards.size() != weights.size()) {
    throw Error("hedge_update: one reward per group required");
  }
  GroupWeights next = weights;
  double z = 0.0;
  for (std::size_t j = 0; j < next.size(); ++j) {
    if (!(rewards[j] >= 0.0 && rewards[j] <= 1.0)) {
      throw Error("hedge_update: reward outside [0, 1] for group " +
                  std::to_string(j));
    }
    next.p[j] *= 1.0 - delta * rewards[j];
    z += next.p[j];
  }
  for (double& v : next.p) v /= z;
  return next;
}

namespace {

OuterResult run_groups(const GroupedDataset& d, const OuterConfig& cfg,
                       const ErmOracle& oracle, const OuterObserver& observer,
                       const InnerObserver& inner_observer) {
  require_valid(d);
  cfg.validate();

  const std::size_t g = d.g;
  const std::size_t n = d.variant_count();
  OuterResult out;
  out.ensemble.members.reserve(cfg.rounds);
  // Flat majority predictions of every h_t, for the final vote.
  kernels::PredictionMatrix rounds_pm(cfg.rounds, n);
  std::vector<double> loss_sums(g, 0.0);

  GroupWeights weights = GroupWeights::uniform(g);
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    InnerConfig inner;
    inner.eta = cfg.inner_eta;
    inner.rounds = cfg.inner_rounds;
    inner.sample_weights = overlap_weights(d, weights.p);

    Ensemble h = fms_boost(d, inner, oracle, inner_observer);
    const auto predictions = flat_predictions(h, d);
    std::copy(predictions.begin(), predictions.end(),
              rounds_pm.values.begin() + (t - 1) * n);

    auto losses = robust_loss(predictions, d).per_group;
    std::vector<double> rewards(g);
    for (std::size_t j = 0; j < g; ++j) {
      rewards[j] = std::clamp(1.0 - losses[j], 0.0, 1.0);
      loss_sums[j] += losses[j];
    }
    if (observer) {
      observer(OuterRound{t, weights, inner.sample_weights, h, losses, rewards});
    }
    out.weight_history.push_back(weights);
    weights = hedge_update(weights, rewards, cfg.delta);
    out.loss_history.push_back(std::move(losses));
    out.reward_history.push_back(std::move(rewards));
    out.ensemble.members.push_back(std::move(h));
  }

  std::vector<std::size_t> votes(n);
  kernels::positive_votes(rounds_pm, votes);
  std::vector<std::int8_t> maj(n);
  for (std::size_t c = 0; c < n; ++c) {
    maj[c] = static_cast<std::int8_t>(to_int(majority_label(votes[c], cfg.rounds)));
  }
  out.report.per_group_maj_loss = robust_loss(maj, d).per_group;
  out.report.per_group_avg_loss.resize(g);
  for (std::size_t j = 0; j < g; ++j) {
    out.report.per_group_avg_loss[j] =
        loss_sums[j] / static_cast<double>(cfg.rounds);
  }
  return out;
}

}  // namespace

OuterResult group_boost(const GroupedDataset& d, const OuterConfig& cfg,
                        const ErmOracle& oracle, const OuterObserver& observer,
                        const InnerObserver& inner_observer) {
  if (!is_disjoint(d)) {
    throw Error("group_boost needs disjoint groups; use to_disjoint or "
                "group_boost_overlapping");
  }
  return run_groups(d, cfg, oracle, observer, inner_observer);
}

OuterResult group_boost_overlapping(const GroupedDataset& d,
                                    const OuterConfig& cfg,
                                    const ErmOracle& oracle,
                                    const OuterObserver& observer,
                                    const InnerObserver& inner_observer) {
  return run_groups(d, cfg, oracle, observer, inner_observer);
}

HedgeRegret hedge_regret(std::span<const GroupWeights> weights,
                         std::span<const std::vector<double>> rewards,
                         double delta) {
  if (weights.size() != rewards.size()) {
    throw Error("hedge_regret: weight and reward histories differ in length");
  }
  HedgeRegret r;
  if (weights.empty()) return r;
  const std::size_t g = weights.front().size();
  std::vector<double> per_expert(g, 0.0);
  for (std::size_t t = 0; t < weights.size(); ++t) {
    for (std::size_t j = 0; j < g; ++j) {
      r.algorithm_cost += rewards[t][j] * weights[t].p[j];
      per_expert[j] += rewards[t][j];
    }
  }
  const double best = *std::min_element(per_expert.begin(), per_expert.end());
  r.bound = (1.0 + delta) * best + std::log(static_cast<double>(g)) / delta;
  return r;
}

bool hedge_regret_check(std::span<const GroupWeights> weights,
                        std::span<const std::vector<double>> rewards,
                        double delta) {
  return hedge_regret(weights, rewards, delta).holds();
}

void write_outer_trace_csv(std::ostream& os, const OuterResult& result) {
  const std::size_t g = result.weight_history.empty()
                            ? 0
                            : result.weight_history.front().size();
  os << "round";
  for (std::size_t j = 0; j < g; ++j) os << ",P_" << j;
  for (std::size_t j = 0; j < g; ++j) os << ",loss_" << j;
  for (std::size_t j = 0; j < g; ++j) os << ",avg_loss_" << j;
  os << '\n';
  os.precision(17);
  std::vector<double> sums(g, 0.0);
  for (std::size_t t = 0; t < result.weight_history.size(); ++t) {
    os << t + 1;
    for (double v : result.weight_history[t].p) os << ',' << v;
    for (std::size_t j = 0; j < g; ++j) {
      os << ',' << result.loss_history[t][j];
      sums[j] += result.loss_history[t][j];
    }
    for (std::size_t j = 0; j < g; ++j) {
      os << ',' << sums[j] / static_cast<double>(t + 1);
    }
    os << '\n';
  }
}

}  // namespace robustboost
