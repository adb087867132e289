#include "robustboost/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robustboost::kernels {

namespace omp {

void weighted_errors(const PredictionMatrix& pm,
                     std::span<const std::int8_t> labels,
                     std::span<const double> weights, std::span<double> out) {
  assert(labels.size() == pm.cols && weights.size() == pm.cols);
  assert(out.size() == pm.rows);
  const auto rows = static_cast<std::ptrdiff_t>(pm.rows);
  const std::size_t cols = pm.cols;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const std::int8_t* row = pm.values.data() + r * cols;
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (row[c] != labels[c]) sum += weights[c];
    }
    out[r] = sum;
  }
}

void group_robust_errors(const PredictionMatrix& pm, const ColumnLayout& layout,
                         std::span<std::size_t> out) {
  const std::size_t g = layout.groups;
  assert(out.size() == pm.rows * g);
  const auto rows = static_cast<std::ptrdiff_t>(pm.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const std::int8_t* row = pm.values.data() + r * pm.cols;
    std::size_t* counts = out.data() + r * g;
    std::fill(counts, counts + g, std::size_t{0});
    for (std::size_t i = 0; i < layout.examples(); ++i) {
      const std::int8_t y = layout.labels[i];
      for (std::size_t c = layout.offsets[i]; c < layout.offsets[i + 1]; ++c) {
        if (row[c] != y) {
          ++counts[layout.group_of[i]];
          break;
        }
      }
    }
  }
}

void positive_votes(const PredictionMatrix& pm, std::span<std::size_t> out) {
  assert(out.size() == pm.cols);
  const auto cols = static_cast<std::ptrdiff_t>(pm.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < pm.rows; ++r) {
      if (pm.values[r * pm.cols + c] > 0) ++count;
    }
    out[c] = count;
  }
}

}  // namespace omp

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int apply_thread_cap_from_env() {
  if (const char* env = std::getenv("ROBUSTBOOST_THREADS")) {
    try {
      const int cap = std::stoi(env);
#ifdef _OPENMP
      if (cap > 0) omp_set_num_threads(cap);
#else
      (void)cap;
#endif
    } catch (const std::exception&) {
      // unparsable values leave the runtime default in place
    }
  }
  return max_threads();
}

// Small problems stay serial; thread start-up dominates below this size.
constexpr std::size_t kParallelCutoff = 1u << 14;

void weighted_errors(const PredictionMatrix& pm,
                     std::span<const std::int8_t> labels,
                     std::span<const double> weights, std::span<double> out) {
  if (max_threads() > 1 && pm.rows * pm.cols >= kParallelCutoff) {
    omp::weighted_errors(pm, labels, weights, out);
  } else {
    serial::weighted_errors(pm, labels, weights, out);
  }
}

void group_robust_errors(const PredictionMatrix& pm, const ColumnLayout& layout,
                         std::span<std::size_t> out) {
  if (max_threads() > 1 && pm.rows * pm.cols >= kParallelCutoff) {
    omp::group_robust_errors(pm, layout, out);
  } else {
    serial::group_robust_errors(pm, layout, out);
  }
}

void positive_votes(const PredictionMatrix& pm, std::span<std::size_t> out) {
  if (max_threads() > 1 && pm.rows * pm.cols >= kParallelCutoff) {
    omp::positive_votes(pm, out);
  } else {
    serial::positive_votes(pm, out);
  }
}

std::size_t argmin_first(std::span<const double> values, double tolerance) {
  if (values.empty()) return 0;
  const double best = *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= best + tolerance) return i;
  }
  return 0;  // unreachable
}

}  // namespace robustboost::kernels
