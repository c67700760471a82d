#include <benchmark/benchmark.h>

#include "cbsfs/genealogy.hpp"
#include "cbsfs/newick.hpp"
#include "cbsfs/tree.hpp"

using namespace cbsfs;

static void BM_SampleGenealogy(benchmark::State& state) {
  const ModelParams p{};
  const int n = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng = substream(1, i++);
    benchmark::DoNotOptimize(sample_genealogy(p, n, rng));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SampleGenealogy)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

// O(n^2) running-maximum pass over all admissible blocks.
static void BM_LkAll(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = substream(2, 0);
  const auto g = sample_genealogy(ModelParams{}, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lk_all(g.config, g.zetas));
  state.SetComplexityN(n);
}
BENCHMARK(BM_LkAll)->RangeMultiplier(4)->Range(4, 1024)->Complexity(benchmark::oNSquared);

static void BM_BuildTree(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = substream(3, 0);
  const auto g = sample_genealogy(ModelParams{}, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_tree(g.config, g.zetas, RootMode::SampleMrca));
  state.SetComplexityN(n);
}
BENCHMARK(BM_BuildTree)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

static void BM_TreeLengthByCarriers(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = substream(4, 0);
  const auto g = sample_genealogy(ModelParams{}, n, rng);
  const auto t = build_tree(g.config, g.zetas, RootMode::SampleMrca);
  for (auto _ : state) benchmark::DoNotOptimize(t.length_by_carriers());
}
BENCHMARK(BM_TreeLengthByCarriers)->Arg(16)->Arg(256)->Arg(4096);

static void BM_DropMutations(benchmark::State& state) {
  const ModelParams p{1.0, 1.0, 5.0};
  Rng rng = substream(5, 0);
  const auto g = sample_genealogy(p, 64, rng);
  const auto t = build_tree(g.config, g.zetas, RootMode::SampleMrca);
  for (auto _ : state) benchmark::DoNotOptimize(overlay_sfs(t, drop_mutations(t, p, rng)));
}
BENCHMARK(BM_DropMutations);

static void BM_NewickRoundTrip(benchmark::State& state) {
  Rng rng = substream(6, 0);
  const auto g = sample_genealogy(ModelParams{}, static_cast<int>(state.range(0)), rng);
  const auto t = build_tree(g.config, g.zetas, RootMode::SampleMrca);
  for (auto _ : state) benchmark::DoNotOptimize(parse_newick(to_newick(t)));
}
BENCHMARK(BM_NewickRoundTrip)->Arg(16)->Arg(256);
