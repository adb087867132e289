#include "robustboost/kernels.hpp"

#include <algorithm>
#include <cassert>

namespace robustboost::kernels::serial {

void weighted_errors(const PredictionMatrix& pm,
                     std::span<const std::int8_t> labels,
                     std::span<const double> weights, std::span<double> out) {
  assert(labels.size() == pm.cols && weights.size() == pm.cols);
  assert(out.size() == pm.rows);
  for (std::size_t r = 0; r < pm.rows; ++r) {
    const std::int8_t* row = pm.values.data() + r * pm.cols;
    double sum = 0.0;
    for (std::size_t c = 0; c < pm.cols; ++c) {
      if (row[c] != labels[c]) sum += weights[c];
    }
    out[r] = sum;
  }
}

void group_robust_errors(const PredictionMatrix& pm, const ColumnLayout& layout,
                         std::span<std::size_t> out) {
  const std::size_t g = layout.groups;
  assert(out.size() == pm.rows * g);
  for (std::size_t r = 0; r < pm.rows; ++r) {
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
  std::fill(out.begin(), out.end(), std::size_t{0});
  for (std::size_t r = 0; r < pm.rows; ++r) {
    const std::int8_t* row = pm.values.data() + r * pm.cols;
    for (std::size_t c = 0; c < pm.cols; ++c) {
      if (row[c] > 0) ++out[c];
    }
  }
}

}  // namespace robustboost::kernels::serial
