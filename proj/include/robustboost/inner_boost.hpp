#pragma once

// Multiplicative weights over each example's perturbation set, played against
// a weighted ERM oracle. The returned ensemble's majority vote is the robust
// predictor; its uniform mixture is the strategy whose worst-variant loss the
// weights control.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "robustboost/ensemble.hpp"
#include "robustboost/hypothesis.hpp"
#include "robustboost/perturbation.hpp"

namespace robustboost {

/// Per-variant weights, flattened in dataset order. `w` is kept rescaled per
/// example so long runs cannot overflow; `log_raw` holds the exact log of the
/// unscaled weight, which survives even when a rescaled `w` underflows to 0.
/// `p` is the per-example normalized distribution.
struct PerturbationWeights {
  std::vector<std::size_t> offsets;  // m + 1 entries
  std::vector<double> w;
  std::vector<double> log_raw;
  std::vector<double> p;

  static PerturbationWeights uniform(const GroupedDataset& d);

  std::size_t examples() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  /// log of the unscaled weight of variant v of example i.
  double raw_log_weight(std::size_t i, std::size_t v) const;
  /// Largest |sum_z P(z) - 1| over examples.
  double max_normalization_error() const;
};

struct InnerConfig {
  double eta = 0.5;
  std::size_t rounds = 1;
  /// One weight per example summing to 1; empty means uniform 1/m.
  std::vector<double> sample_weights;

  /// Throws Error when the config cannot be used on d.
  void validate(const GroupedDataset& d) const;
  std::vector<double> resolved_sample_weights(const GroupedDataset& d) const;
};

/// min(1/2, sqrt(ln k / T)). Requires k >= 2 and T >= 1.
double default_eta(std::size_t k, std::size_t rounds);

/// ceil(32 ln k / eps^2), at least 1.
std::size_t default_inner_rounds(std::size_t k, double epsilon);

/// Everything a caller may want to see after round t (1-based).
struct InnerRound {
  std::size_t round = 0;
  const Hypothesis& hypothesis;
  double erm_loss = 0.0;
  std::span<const WeightedPoint> batch;
  /// h_t's prediction on every flat variant.
  std::span<const std::int8_t> predictions;
  /// Weights after the update that follows h_t.
  const PerturbationWeights& weights;
};

using InnerObserver = std::function<void(const InnerRound&)>;

/// Weighted ERM batch {(z, y, p_i * P(z))} in dataset order.
std::vector<WeightedPoint> erm_batch(const GroupedDataset& d,
                                     const PerturbationWeights& w,
                                     std::span<const double> sample_weights);

/// One pure multiplicative step: variants h misclassifies are scaled by
/// (1 + eta); each example is then renormalized.
PerturbationWeights weight_update_round(const GroupedDataset& d,
                                        const PerturbationWeights& w,
                                        const Hypothesis& h, double eta);

/// Runs cfg.rounds rounds and returns h_1..h_T in round order.
Ensemble fms_boost(const GroupedDataset& d, const InnerConfig& cfg,
                   const ErmOracle& oracle, const InnerObserver& observer = {});

struct InnerTraceRow {
  std::size_t round = 0;
  double erm_loss = 0.0;
  double mixed_robust_loss = 0.0;
  double majority_robust_loss = 0.0;
};

/// Incremental per-round trace: mixed and majority robust losses of the
/// prefix h_1..h_t, maintained in O(#variants) per round.
class InnerTracer {
 public:
  explicit InnerTracer(const GroupedDataset& d);

  void observe(const InnerRound& r);
  InnerObserver observer();

  const std::vector<InnerTraceRow>& rows() const { return rows_; }
  void write_csv(std::ostream& os) const;

 private:
  const GroupedDataset* d_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int8_t> labels_;     // per flat variant
  std::vector<std::size_t> mistakes_;   // per flat variant
  std::vector<std::size_t> positives_;  // per flat variant
  std::vector<InnerTraceRow> rows_;
};

}  // namespace robustboost
