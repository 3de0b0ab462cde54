// OpenMP kernels against their serial references.

#include "lmmsel/benchmark.hpp"

#include <benchmark/benchmark.h>

using namespace lmmsel;

namespace {

BenchmarkConfig small_benchmark() {
  BenchmarkConfig c;
  c.scenario = custom_scenario(30, 4, 12, 0);
  c.replications = 8;
  c.master_seed = 5;
  c.lambda_count = 8;
  return c;
}

void BM_ReplicationsSerial(benchmark::State& state) {
  const BenchmarkConfig c = small_benchmark();
  for (auto _ : state) benchmark::DoNotOptimize(run_benchmark_serial(c));
}

void BM_ReplicationsParallel(benchmark::State& state) {
  const BenchmarkConfig c = small_benchmark();
  for (auto _ : state) benchmark::DoNotOptimize(run_benchmark(c, static_cast<int>(state.range(0))));
}

void run_path(benchmark::State& state, PathMode mode) {
  const SimulatedDataset sim = simulate_dataset(default_scenario(3));
  const CovarianceTemplate t = random_intercept_template(90);
  const Vector grid = lambda_grid(1e-2, 1e2, 8);
  for (auto _ : state) benchmark::DoNotOptimize(regularization_path(sim.dataset, t, grid, PenaltyConfig{}, mode));
}

void BM_PathColdSerial(benchmark::State& state) { run_path(state, PathMode::kColdSerial); }
void BM_PathColdParallel(benchmark::State& state) { run_path(state, PathMode::kColdParallel); }
void BM_PathWarm(benchmark::State& state) { run_path(state, PathMode::kWarmStart); }

// One evaluation of -2 log L~ at a fresh theta, as seen by the optimizer.
void BM_DevianceReference(benchmark::State& state) {
  const SimulatedDataset sim = simulate_dataset(default_scenario(3));
  const CovarianceTemplate t = random_intercept_template(90);
  Vector theta(1);
  theta << 0.9;
  for (auto _ : state) {
    theta(0) += 1e-9;
    benchmark::DoNotOptimize(profiled_loglik(sim.dataset, t, sim.beta_star_star, theta));
  }
}

void BM_DevianceCached(benchmark::State& state) {
  const SimulatedDataset sim = simulate_dataset(default_scenario(3));
  const CovarianceTemplate t = random_intercept_template(90);
  ProfiledDeviance dev(sim.dataset, t);
  Vector theta(1);
  theta << 0.9;
  for (auto _ : state) {
    theta(0) += 1e-9;
    benchmark::DoNotOptimize(dev(sim.beta_star_star, theta));
  }
}

}  // namespace

BENCHMARK(BM_ReplicationsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicationsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathColdSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathColdParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathWarm)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DevianceReference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DevianceCached)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
