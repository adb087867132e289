#include "robustboost/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robustboost/kernels.hpp"

namespace robustboost {

Label label_from_int(long long v) {
  if (v == 1) return Label::Positive;
  if (v == -1) return Label::Negative;
  throw Error("label must be -1 or +1, got " + std::to_string(v));
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double c : coords_) {
    if (!std::isfinite(c)) throw Error("point coordinates must be finite");
  }
}

ThresholdHypothesis::ThresholdHypothesis(double t, Orientation o)
    : tau(t), orientation(o) {
  if (!std::isfinite(t)) throw Error("threshold must be finite");
}

Label ThresholdHypothesis::predict(const Point& z) const {
  if (z.dim() != 1) throw Error("threshold hypotheses are defined on the line");
  const bool above = z[0] >= tau;
  const bool positive =
      orientation == Orientation::AbovePositive ? above : !above;
  return positive ? Label::Positive : Label::Negative;
}

TableHypothesis::TableHypothesis(std::vector<Point> universe,
                                 std::vector<Label> outputs) {
  if (universe.size() != outputs.size()) {
    throw Error("table universe and outputs differ in length");
  }
  auto data = std::make_shared<Data>();
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (!data->index.emplace(universe[i], i).second) {
      throw Error("table universe has a repeated point at " +
                  std::to_string(i));
    }
  }
  data->universe = std::move(universe);
  data->outputs = std::move(outputs);
  data_ = std::move(data);
}

std::size_t TableHypothesis::find(const Point& z) const {
  const auto it = data_->index.find(z);
  return it == data_->index.end() ? npos : it->second;
}

Label TableHypothesis::predict(const Point& z) const {
  const std::size_t i = find(z);
  if (i == npos) throw Error("point outside the table's universe");
  return data_->outputs[i];
}

Label predict(const Hypothesis& h, const Point& z) {
  return std::visit([&](const auto& v) { return v.predict(z); }, h);
}

namespace {

void check_weights(std::span<const WeightedPoint> batch) {
  for (const auto& wp : batch) {
    if (!(wp.weight >= 0.0) || !std::isfinite(wp.weight)) {
      throw Error("batch weights must be finite and nonnegative");
    }
  }
}

double total_weight(std::span<const WeightedPoint> batch) {
  double s = 0.0;
  for (const auto& wp : batch) s += wp.weight;
  return s;
}

}  // namespace

double weighted_loss(const Hypothesis& h, std::span<const WeightedPoint> batch) {
  double loss = 0.0;
  for (const auto& wp : batch) {
    if (predict(h, wp.z) != wp.y) loss += wp.weight;
  }
  return loss;
}

ThresholdHypothesis erm_threshold(std::span<const WeightedPoint> batch) {
  if (batch.empty()) throw Error("erm_threshold: empty batch");
  for (const auto& wp : batch) {
    if (wp.z.dim() != 1) throw Error("erm_threshold: batch point is not 1-D");
  }
  check_weights(batch);

  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return batch[a].z[0] < batch[b].z[0];
  });

  double pos_total = 0.0;
  double neg_total = 0.0;
  for (const auto& wp : batch) {
    (wp.y == Label::Positive ? pos_total : neg_total) += wp.weight;
  }

  // Candidate c has everything in distinct-value groups [0, c) below it.
  // Loss of AbovePositive = positives below + negatives at/above.
  std::vector<double> taus;
  std::vector<double> loss_above;
  std::vector<double> loss_below;
  const double lo = batch[order.front()].z[0];
  const double hi = batch[order.back()].z[0];

  double pos_below = 0.0;
  double neg_below = 0.0;
  auto push = [&](double tau) {
    taus.push_back(tau);
    loss_above.push_back(pos_below + (neg_total - neg_below));
    loss_below.push_back(neg_below + (pos_total - pos_below));
  };

  push(lo - 1.0);
  std::size_t i = 0;
  while (i < order.size()) {
    const double v = batch[order[i]].z[0];
    while (i < order.size() && batch[order[i]].z[0] == v) {
      const auto& wp = batch[order[i]];
      (wp.y == Label::Positive ? pos_below : neg_below) += wp.weight;
      ++i;
    }
    if (i < order.size()) {
      push(v + (batch[order[i]].z[0] - v) / 2.0);
    }
  }
  push(hi + 1.0);

  // Interleave as (tau asc, AbovePositive first) and take the first
  // candidate within tolerance of the minimum.
  std::vector<double> losses;
  losses.reserve(2 * taus.size());
  for (std::size_t c = 0; c < taus.size(); ++c) {
    losses.push_back(loss_above[c]);
    losses.push_back(loss_below[c]);
  }
  const double tol = kTieTolerance * (pos_total + neg_total);
  const std::size_t best = kernels::argmin_first(losses, tol);
  return ThresholdHypothesis(taus[best / 2], best % 2 == 0
                                                 ? Orientation::AbovePositive
                                                 : Orientation::BelowPositive);
}

std::size_t erm_table(std::span<const WeightedPoint> batch,
                      std::span<const TableHypothesis> hypotheses) {
  if (hypotheses.empty()) throw Error("erm_table: empty hypothesis class");
  check_weights(batch);
  std::vector<double> losses(hypotheses.size(), 0.0);
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    for (const auto& wp : batch) {
      if (hypotheses[h].predict(wp.z) != wp.y) losses[h] += wp.weight;
    }
  }
  return kernels::argmin_first(losses, kTieTolerance * total_weight(batch));
}

Hypothesis ThresholdOracle::fit(std::span<const WeightedPoint> batch) const {
  return erm_threshold(batch);
}

TableOracle::TableOracle(std::vector<TableHypothesis> hypotheses)
    : hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty()) throw Error("TableOracle: empty hypothesis class");
  for (const auto& h : hypotheses_) {
    for (const auto& p : h.universe()) merged_.emplace(p, merged_.size());
  }
  const std::size_t u = merged_.size();
  outputs_.assign(hypotheses_.size() * u, 0);
  for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
    const auto& t = hypotheses_[h];
    for (std::size_t j = 0; j < t.universe().size(); ++j) {
      outputs_[h * u + merged_.at(t.universe()[j])] =
          static_cast<std::int8_t>(to_int(t.outputs()[j]));
    }
  }
}

std::size_t TableOracle::fit_index(std::span<const WeightedPoint> batch) const {
  check_weights(batch);
  const std::size_t u = merged_.size();
  const std::size_t n = batch.size();
  std::vector<std::size_t> cols(n);
  std::vector<std::int8_t> labels(n);
  std::vector<double> weights(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto it = merged_.find(batch[c].z);
    if (it == merged_.end()) {
      throw Error("erm_table: batch point outside every table universe");
    }
    cols[c] = it->second;
    labels[c] = static_cast<std::int8_t>(to_int(batch[c].y));
    weights[c] = batch[c].weight;
  }

  kernels::PredictionMatrix pm(hypotheses_.size(), n);
  for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
    const std::int8_t* src = outputs_.data() + h * u;
    for (std::size_t c = 0; c < n; ++c) {
      const std::int8_t v = src[cols[c]];
      if (v == 0) {
        throw Error("erm_table: batch point outside the universe of member " +
                    std::to_string(h));
      }
      pm.at(h, c) = v;
    }
  }

  std::vector<double> losses(hypotheses_.size());
  kernels::weighted_errors(pm, labels, weights, losses);
  double total = 0.0;
  for (double w : weights) total += w;
  return kernels::argmin_first(losses, kTieTolerance * total);
}

Hypothesis TableOracle::fit(std::span<const WeightedPoint> batch) const {
  return hypotheses_[fit_index(batch)];
}

FiniteClassOracle::FiniteClassOracle(std::vector<Hypothesis> hypotheses)
    : hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty()) throw Error("FiniteClassOracle: empty class");
}

std::size_t FiniteClassOracle::fit_index(
    std::span<const WeightedPoint> batch) const {
  check_weights(batch);
  std::vector<double> losses(hypotheses_.size());
  for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
    losses[h] = weighted_loss(hypotheses_[h], batch);
  }
  return kernels::argmin_first(losses, kTieTolerance * total_weight(batch));
}

Hypothesis FiniteClassOracle::fit(std::span<const WeightedPoint> batch) const {
  return hypotheses_[fit_index(batch)];
}

}  // namespace robustboost
