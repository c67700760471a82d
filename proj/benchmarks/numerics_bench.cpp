#include <benchmark/benchmark.h>

#include "cbsfs/clonal.hpp"
#include "cbsfs/sfs.hpp"
#include "cbsfs/specfun.hpp"

using namespace cbsfs;

static void BM_Digamma(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(digamma(x));
    x = x < 50.0 ? x + 0.7 : 0.3;
  }
}
BENCHMARK(BM_Digamma);

static void BM_GammaUpperZero(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(gamma_upper_zero(r));
}
BENCHMARK(BM_GammaUpperZero)->Arg(10)->Arg(100)->Arg(1000);

static void BM_H1Second(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(h1_deriv(2.0, 2));
}
BENCHMARK(BM_H1Second);

static void BM_SEll(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(s_ell(ModelParams{}, n, n / 2, 1.0));
}
BENCHMARK(BM_SEll)->Arg(10)->Arg(100)->Arg(1000);

static void BM_ExpectedSfs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expected_sfs(ModelParams{}, n, 1.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExpectedSfs)->Arg(10)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_ExpectedSfsAveraged(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expected_sfs_averaged(ModelParams{}, n));
}
BENCHMARK(BM_ExpectedSfsAveraged)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_MeanDensity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mean_density(ModelParams{}, 0.8));
}
BENCHMARK(BM_MeanDensity);

static void BM_SpineQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spine_term_quadrature(ModelParams{}, 1.0));
}
BENCHMARK(BM_SpineQuadrature)->Unit(benchmark::kMicrosecond);

static void BM_ZclPowScaled(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zcl_pow_scaled(1.0, n));
}
BENCHMARK(BM_ZclPowScaled)->Arg(5)->Arg(800);

static void BM_McClonal(benchmark::State& state) {
  const ModelParams p{1.0, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(mc_clonal(p, 3, 10000, 1, 1, ClonalStatistic::ZpowR));
}
BENCHMARK(BM_McClonal)->Unit(benchmark::kMillisecond);
