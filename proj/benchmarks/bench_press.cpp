#include "plspress/modelselect.hpp"
#include "plspress/press.hpp"
#include "plspress/simgen.hpp"

#include <benchmark/benchmark.h>

using namespace plspress;

namespace {

SimData bench_data(Index n) {
  SimConfig config;
  config.n = n;
  config.p = 50;
  config.q = 50;
  config.R_true = 3;
  config.seed = 12345;
  return simulate(config);
}

void BM_FitPls(benchmark::State& state) {
  const SimData sim = bench_data(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_pls(sim.data, 3));
  state.SetComplexityN(state.range(0));
}

void BM_PressPls(benchmark::State& state) {
  const SimData sim = bench_data(state.range(0));
  for (auto _ : state) {
    const PlsFit fit = fit_pls(sim.data, 3);
    benchmark::DoNotOptimize(press_pls(fit, sim.data));
  }
  state.SetComplexityN(state.range(0));
}

void BM_LoocvFull(benchmark::State& state) {
  const SimData sim = bench_data(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(loocv_pls_full(sim.data, 3));
  state.SetComplexityN(state.range(0));
}

void BM_SparseRankOne(benchmark::State& state) {
  const SimData sim = bench_data(200);
  const Matrix M = sim.data.X.transpose() * sim.data.Y;
  const SvdTruncated warm = svd_truncated(M, 1);
  const double gamma = 0.3 * gamma_max(M, warm);
  for (auto _ : state) benchmark::DoNotOptimize(sparse_rank_one(M, warm, gamma));
}

void BM_SelectRPress(benchmark::State& state) {
  const SimData sim = bench_data(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(select_R(sim.data, 10, SelectionMethod::press));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_FitPls)->RangeMultiplier(2)->Range(100, 800)->Complexity(benchmark::oN);
BENCHMARK(BM_PressPls)->RangeMultiplier(2)->Range(100, 800)->Complexity(benchmark::oN);
BENCHMARK(BM_LoocvFull)->RangeMultiplier(2)->Range(100, 800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SparseRankOne);
BENCHMARK(BM_SelectRPress)->RangeMultiplier(2)->Range(100, 800)->Complexity(benchmark::oN);

BENCHMARK_MAIN();
