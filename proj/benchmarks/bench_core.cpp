#include <benchmark/benchmark.h>

#include <vector>

#include "monotone/checks.hpp"
#include "monotone/coupling.hpp"
#include "monotone/exact.hpp"
#include "monotone/ginv.hpp"
#include "monotone/models.hpp"

using namespace monotone;

namespace {

FiniteKernel walk(long n) { return reflected_walk({{-1, 0.55}, {0, 0.1}, {1, 0.35}}, n - 1).kernel; }

void BM_Compose(benchmark::State& state) {
  const auto k = walk(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compose(k, k));
}
BENCHMARK(BM_Compose)->RangeMultiplier(4)->Range(16, 1024);

void BM_GinvQuery(benchmark::State& state) {
  const auto k = walk(state.range(0));
  const auto t = build_ginv(k);
  const std::size_t n = k.size();
  std::size_t x = 0;
  double u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.query_index(x, u));
    x = (x + 7) % n;
    u = u < 0.9 ? u + 0.0123 : 0.05;
  }
}
BENCHMARK(BM_GinvQuery)->RangeMultiplier(8)->Range(16, 4096);

void BM_Stationary(benchmark::State& state) {
  const auto k = walk(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stationary(k));
}
BENCHMARK(BM_Stationary)->RangeMultiplier(4)->Range(16, 1024);

void BM_CovarianceCurve(benchmark::State& state) {
  const auto k = walk(state.range(0));
  const auto pi = stationary(k);
  auto id = [](double x) { return x; };
  for (auto _ : state) benchmark::DoNotOptimize(covariance_curve(k, pi, id, id, 64));
}
BENCHMARK(BM_CovarianceCurve)->RangeMultiplier(4)->Range(16, 1024);

void BM_Condition1Check(benchmark::State& state) {
  const auto k = walk(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_condition1(k));
}
BENCHMARK(BM_Condition1Check)->RangeMultiplier(4)->Range(16, 1024);

void BM_GinvScan(benchmark::State& state) {
  const auto k = walk(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_ginv_monotone(k));
}
BENCHMARK(BM_GinvScan)->RangeMultiplier(4)->Range(16, 256);

void BM_CoupledSim(benchmark::State& state) {
  const auto k = walk(64);
  const std::vector<double> x0{0.0, 16.0, 32.0, 48.0, 63.0};
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_coupled(k, x0, steps, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 5);
}
BENCHMARK(BM_CoupledSim)->Arg(1000)->Arg(100000);

void BM_McAutocovariance(benchmark::State& state) {
  const auto k = walk(64);
  const auto pi = stationary(k);
  const auto paths = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_autocovariance(k, pi, 32, paths, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 32);
}
BENCHMARK(BM_McAutocovariance)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
