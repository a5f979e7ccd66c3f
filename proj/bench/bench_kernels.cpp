#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "caflow/flow_curvature.hpp"
#include "caflow/parallel.hpp"
#include "caflow/spectral.hpp"

using namespace caflow;

namespace {

std::vector<double> wave(std::size_t n) {
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    f[k] = std::exp(std::sin(p)) + 0.1 * std::cos(5 * p);
  }
  return f;
}

void BM_DerivativeFFT(benchmark::State& state) {
  const auto f = wave(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::derivative(f, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DerivativeFFT)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_DerivativeReference(benchmark::State& state) {
  const auto f = wave(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::reference::derivative(f, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DerivativeReference)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

const std::vector<ClosedCurve>& curves() {
  static const std::vector<ClosedCurve> batch = parallel::random_star_convex_batch_serial(1, 64, 512);
  return batch;
}

void BM_SummarizeParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parallel::summarize(curves()));
  state.counters["threads"] = parallel::max_threads();
}
BENCHMARK(BM_SummarizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SummarizeSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parallel::summarize_serial(curves()));
}
BENCHMARK(BM_SummarizeSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RandomBatchParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parallel::random_star_convex_batch(1, 64, 256));
}
BENCHMARK(BM_RandomBatchParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RandomBatchSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parallel::random_star_convex_batch_serial(1, 64, 256));
}
BENCHMARK(BM_RandomBatchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_CurvatureStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const CurvatureFlowState s = initial_curvature_state(centro_affine(preset(PerturbedEllipse{1, 1, 0.05, 3}, n)));
  const double dt = 0.5 * max_stable_dt(s.g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, dt));
}
BENCHMARK(BM_CurvatureStep)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
