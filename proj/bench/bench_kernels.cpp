// Serial vs OpenMP kernels on random prediction matrices.
// Thread count follows ROBUSTBOOST_THREADS / OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "robustboost/kernels.hpp"

namespace k = robustboost::kernels;

namespace {

struct Fixture {
  k::PredictionMatrix pm;
  k::ColumnLayout layout;
  std::vector<std::int8_t> labels;
  std::vector<double> weights;

  Fixture(std::size_t rows, std::size_t examples, std::size_t variants) {
    std::mt19937_64 rng(rows * 31 + examples);
    const std::size_t cols = examples * variants;
    pm = k::PredictionMatrix(rows, cols);
    for (auto& v : pm.values) v = (rng() & 1) ? 1 : -1;
    layout.groups = 4;
    for (std::size_t i = 0; i <= examples; ++i) layout.offsets.push_back(i * variants);
    for (std::size_t i = 0; i < examples; ++i) {
      layout.labels.push_back((rng() & 1) ? 1 : -1);
      layout.group_of.push_back(i % layout.groups);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      labels.push_back(layout.labels[c / variants]);
      weights.push_back(1.0 / static_cast<double>(cols));
    }
  }
};

const Fixture& fixture(std::size_t rows) {
  static std::vector<std::pair<std::size_t, Fixture>> cache;
  for (const auto& [r, f] : cache) {
    if (r == rows) return f;
  }
  cache.emplace_back(rows, Fixture(rows, 500, 8));
  return cache.back().second;
}

template <auto Fn>
void weighted(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.pm.rows);
  for (auto _ : state) {
    Fn(f.pm, f.labels, f.weights, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.pm.values.size());
}

template <auto Fn>
void group_errors(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<std::size_t> out(f.pm.rows * f.layout.groups);
  for (auto _ : state) {
    Fn(f.pm, f.layout, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.pm.values.size());
}

template <auto Fn>
void votes(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<std::size_t> out(f.pm.cols);
  for (auto _ : state) {
    Fn(f.pm, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.pm.values.size());
}

}  // namespace

BENCHMARK(weighted<k::serial::weighted_errors>)->Name("weighted_errors/serial")->Arg(64)->Arg(1024);
BENCHMARK(weighted<k::omp::weighted_errors>)->Name("weighted_errors/omp")->Arg(64)->Arg(1024);
BENCHMARK(group_errors<k::serial::group_robust_errors>)
    ->Name("group_robust_errors/serial")->Arg(64)->Arg(1024);
BENCHMARK(group_errors<k::omp::group_robust_errors>)
    ->Name("group_robust_errors/omp")->Arg(64)->Arg(1024);
BENCHMARK(votes<k::serial::positive_votes>)->Name("positive_votes/serial")->Arg(64)->Arg(1024);
BENCHMARK(votes<k::omp::positive_votes>)->Name("positive_votes/omp")->Arg(64)->Arg(1024);

int main(int argc, char** argv) {
  k::apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
