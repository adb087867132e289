#include "robustboost/inner_boost.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

#include "robustboost/metrics.hpp"

namespace robustboost {

namespace {

// Per-example rescale point for the running weights.
constexpr double kRescaleAbove = 1e150;

}  // namespace

PerturbationWeights PerturbationWeights::uniform(const GroupedDataset& d) {
  PerturbationWeights pw;
  pw.offsets.reserve(d.size() + 1);
  pw.offsets.push_back(0);
  for (const auto& e : d.examples) {
    pw.offsets.push_back(pw.offsets.back() + e.u.size());
    for (std::size_t v = 0; v < e.u.size(); ++v) {
      pw.w.push_back(1.0);
      pw.p.push_back(1.0 / static_cast<double>(e.u.size()));
    }
  }
  pw.log_raw.assign(pw.w.size(), 0.0);
  return pw;
}

double PerturbationWeights::raw_log_weight(std::size_t i, std::size_t v) const {
  if (i >= examples() || offsets[i] + v >= offsets[i + 1]) {
    throw Error("variant index out of range");
  }
  return log_raw[offsets[i] + v];
}

double PerturbationWeights::max_normalization_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < examples(); ++i) {
    double s = 0.0;
    for (std::size_t c = offsets[i]; c < offsets[i + 1]; ++c) s += p[c];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

void InnerConfig::validate(const GroupedDataset& d) const {
  if (!(eta > 0.0 && eta <= 0.5)) {
    throw Error("inner config: eta must lie in (0, 1/2]");
  }
  if (rounds == 0) throw Error("inner config: rounds must be positive");
  if (sample_weights.empty()) return;
  if (sample_weights.size() != d.size()) {
    throw Error("inner config: one sample weight per example required");
  }
  double sum = 0.0;
  for (double p : sample_weights) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error("inner config: sample weights must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error("inner config: sample weights must sum to 1");
  }
}

std::vector<double> InnerConfig::resolved_sample_weights(
    const GroupedDataset& d) const {
  if (!sample_weights.empty()) return sample_weights;
  return std::vector<double>(d.size(), 1.0 / static_cast<double>(d.size()));
}

double default_eta(std::size_t k, std::size_t rounds) {
  if (k < 2) throw Error("default_eta: k must be at least 2");
  if (rounds < 1) throw Error("default_eta: rounds must be positive");
  return std::min(0.5, std::sqrt(std::log(static_cast<double>(k)) /
                                 static_cast<double>(rounds)));
}

std::size_t default_inner_rounds(std::size_t k, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  const double t =
      std::ceil(32.0 * std::log(static_cast<double>(k)) / (epsilon * epsilon));
  return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

std::vector<WeightedPoint> erm_batch(const GroupedDataset& d,
                                     const PerturbationWeights& w,
                                     std::span<const double> sample_weights) {
  std::vector<WeightedPoint> batch;
  batch.reserve(w.p.size());
  std::size_t c = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& e = d.examples[i];
    for (const auto& z : e.u) {
      batch.push_back({z, e.y, sample_weights[i] * w.p[c++]});
    }
  }
  return batch;
}

namespace {

void apply_mistakes(const GroupedDataset& d, PerturbationWeights& w,
                    std::span<const std::int8_t> predictions, double eta) {
  const double step = std::log1p(eta);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto y = static_cast<std::int8_t>(to_int(d.examples[i].y));
    const std::size_t lo = w.offsets[i];
    const std::size_t hi = w.offsets[i + 1];
    double largest = 0.0;
    for (std::size_t c = lo; c < hi; ++c) {
      if (predictions[c] != y) {
        w.w[c] *= 1.0 + eta;
        w.log_raw[c] += step;
      }
      largest = std::max(largest, w.w[c]);
    }
    if (largest > kRescaleAbove) {
      for (std::size_t c = lo; c < hi; ++c) w.w[c] /= largest;
    }
    double total = 0.0;
    for (std::size_t c = lo; c < hi; ++c) total += w.w[c];
    for (std::size_t c = lo; c < hi; ++c) w.p[c] = w.w[c] / total;
  }
}

std::vector<std::int8_t> predictions_of(const Hypothesis& h,
                                        const GroupedDataset& d) {
  std::vector<std::int8_t> out;
  out.reserve(d.variant_count());
  for (const auto& e : d.examples) {
    for (const auto& z : e.u) {
      out.push_back(static_cast<std::int8_t>(to_int(predict(h, z))));
    }
  }
  return out;
}

}  // namespace

PerturbationWeights weight_update_round(const GroupedDataset& d,
                                        const PerturbationWeights& w,
                                        const Hypothesis& h, double eta) {
  if (!(eta > 0.0)) throw Error("weight update needs eta > 0");
  PerturbationWeights next = w;
  apply_mistakes(d, next, predictions_of(h, d), eta);
  return next;
}

Ensemble fms_boost(const GroupedDataset& d, const InnerConfig& cfg,
                   const ErmOracle& oracle, const InnerObserver& observer) {
  require_valid(d);
  cfg.validate(d);
  const auto p = cfg.resolved_sample_weights(d);

  auto weights = PerturbationWeights::uniform(d);
  Ensemble out;
  out.hypotheses.reserve(cfg.rounds);
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    const auto batch = erm_batch(d, weights, p);
    Hypothesis h = oracle.fit(batch);
    const auto predictions = predictions_of(h, d);
    double erm_loss = 0.0;
    for (std::size_t c = 0; c < batch.size(); ++c) {
      if (predictions[c] != to_int(batch[c].y)) erm_loss += batch[c].weight;
    }
    apply_mistakes(d, weights, predictions, cfg.eta);
    assert(weights.max_normalization_error() <= 1e-9);
    if (observer) {
      observer(InnerRound{t, h, erm_loss, batch, predictions, weights});
    }
    out.hypotheses.push_back(std::move(h));
  }
  return out;
}

InnerTracer::InnerTracer(const GroupedDataset& d) : d_(&d) {
  offsets_.push_back(0);
  for (const auto& e : d.examples) {
    offsets_.push_back(offsets_.back() + e.u.size());
    labels_.insert(labels_.end(), e.u.size(),
                   static_cast<std::int8_t>(to_int(e.y)));
  }
  mistakes_.assign(labels_.size(), 0);
  positives_.assign(labels_.size(), 0);
}

void InnerTracer::observe(const InnerRound& r) {
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    if (r.predictions[c] != labels_[c]) ++mistakes_[c];
    if (r.predictions[c] > 0) ++positives_[c];
  }
  const std::size_t t = r.round;
  const std::size_t m = d_->size();
  double mixed = 0.0;
  std::size_t maj_mistakes = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t worst = 0;
    bool maj_wrong = false;
    for (std::size_t c = offsets_[i]; c < offsets_[i + 1]; ++c) {
      worst = std::max(worst, mistakes_[c]);
      if (to_int(majority_label(positives_[c], t)) != labels_[c]) {
        maj_wrong = true;
      }
    }
    mixed += static_cast<double>(worst) / static_cast<double>(t);
    if (maj_wrong) ++maj_mistakes;
  }
  rows_.push_back({t, r.erm_loss, mixed / static_cast<double>(m),
                   static_cast<double>(maj_mistakes) / static_cast<double>(m)});
}

InnerObserver InnerTracer::observer() {
  return [this](const InnerRound& r) { observe(r); };
}

void InnerTracer::write_csv(std::ostream& os) const {
  os << "round,erm_loss,mixed_robust_loss,majority_robust_loss\n";
  os.precision(17);
  for (const auto& row : rows_) {
    os << row.round << ',' << row.erm_loss << ',' << row.mixed_robust_loss
       << ',' << row.majority_robust_loss << '\n';
  }
}

}  // namespace robustboost
