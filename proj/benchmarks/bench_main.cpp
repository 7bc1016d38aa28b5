#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "radarloc/fft.hpp"
#include "radarloc/radarloc.hpp"

using namespace radarloc;

static void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::complex<double>> base(n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto& v : base) v = {g(rng), g(rng)};
  for (auto _ : state) {
    auto x = base;
    fft_inplace(x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

static void BM_CfarDetect(benchmark::State& state) {
  RangeSpectrum s{std::vector<double>(static_cast<std::size_t>(state.range(0))), 1.0};
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> e(1.0);
  for (double& v : s.magnitude_sq) v = e(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cfar_detect(s, CfarConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CfarDetect)->Arg(129)->Arg(1 << 20);

static void BM_EstimateRange(benchmark::State& state) {
  const ChirpConfig cfg;
  const Target t[] = {{2.3, 1.0}};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_range(cfg, t, 20.0, ++seed, CfarConfig{}));
}
BENCHMARK(BM_EstimateRange);

static void BM_MultisiteErrorMap(benchmark::State& state) {
  const SisoPairConfig pair;
  const GridSpec grid{0, 4, 0, 4, 0.05};
  const Parallelism par{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(multisite_error_map(pair, grid, par));
}
BENCHMARK(BM_MultisiteErrorMap)->Arg(1)->Arg(4)->UseRealTime();

static void BM_OptimizePlacement(benchmark::State& state) {
  PlacementProblem p;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_placement(p));
}
BENCHMARK(BM_OptimizePlacement)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
