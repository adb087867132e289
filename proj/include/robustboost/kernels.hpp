#pragma once

// Data-parallel scans shared by the ERM oracles, the boosting loops and the
// brute-force optimality oracles.
//
// Every kernel exists twice: `serial` is the reference used by the tests,
// `omp` splits the outer loop across OpenMP threads. Each output element is
// reduced by a single thread in a fixed order, so both versions return
// bit-identical results regardless of the schedule.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace robustboost::kernels {

/// Row-major matrix of +1 / -1 predictions: one row per hypothesis, one column
/// per flattened (example, variant) point. 0 is reserved for "undefined".
struct PredictionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> values;

  PredictionMatrix() = default;
  PredictionMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), values(r * c, 0) {}

  std::int8_t& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  std::int8_t at(std::size_t r, std::size_t c) const {
    return values[r * cols + c];
  }
  std::span<const std::int8_t> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

/// Example layout over the columns: example i owns columns
/// [offsets[i], offsets[i+1]).
struct ColumnLayout {
  std::vector<std::size_t> offsets;   // size m + 1
  std::vector<std::int8_t> labels;    // size m, +1 / -1
  std::vector<std::size_t> group_of;  // size m, disjoint group id in [0, g)
  std::size_t groups = 1;

  std::size_t examples() const { return labels.size(); }
};

namespace serial {

/// out[r] = sum_c weights[c] * 1[pm(r, c) != labels[c]].
void weighted_errors(const PredictionMatrix& pm,
                     std::span<const std::int8_t> labels,
                     std::span<const double> weights, std::span<double> out);

/// out[r * groups + j] = number of examples of group j on which row r makes
/// at least one mistake.
void group_robust_errors(const PredictionMatrix& pm, const ColumnLayout& layout,
                         std::span<std::size_t> out);

/// out[c] = number of rows predicting +1 at column c.
void positive_votes(const PredictionMatrix& pm, std::span<std::size_t> out);

}  // namespace serial

namespace omp {

void weighted_errors(const PredictionMatrix& pm,
                     std::span<const std::int8_t> labels,
                     std::span<const double> weights, std::span<double> out);

void group_robust_errors(const PredictionMatrix& pm, const ColumnLayout& layout,
                         std::span<std::size_t> out);

void positive_votes(const PredictionMatrix& pm, std::span<std::size_t> out);

}  // namespace omp

// Dispatching entry points: OpenMP when more than one thread is available.
void weighted_errors(const PredictionMatrix& pm,
                     std::span<const std::int8_t> labels,
                     std::span<const double> weights, std::span<double> out);
void group_robust_errors(const PredictionMatrix& pm, const ColumnLayout& layout,
                         std::span<std::size_t> out);
void positive_votes(const PredictionMatrix& pm, std::span<std::size_t> out);

/// First index whose value is within `tolerance` of the minimum.
std::size_t argmin_first(std::span<const double> values, double tolerance);

/// Threads the dispatchers will use.
int max_threads();

/// Applies ROBUSTBOOST_THREADS (a positive integer) as the thread cap.
/// Returns the cap in effect afterwards.
int apply_thread_cap_from_env();

}  // namespace robustboost::kernels
