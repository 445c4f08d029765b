#include <hurst_sde/fbm.hpp>

#include <benchmark/benchmark.h>

using namespace hurst_sde;

static void BM_CirculantFbm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fbm::generate_fbm(HurstIndex(0.7), n, 1.0, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CirculantFbm)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

static void BM_CholeskyFbm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fbm::generate_fbm_cholesky(HurstIndex(0.7), n, 1.0, seed++));
}
BENCHMARK(BM_CholeskyFbm)->RangeMultiplier(2)->Range(128, 1024);

static void BM_CirculantEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fbm::circulant_eigenvalues(HurstIndex(0.8), n));
}
BENCHMARK(BM_CirculantEigenvalues)->Range(1 << 12, 1 << 18);

static void BM_SigmaSq(benchmark::State& state) {
  double h = 0.55;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbm::sigma_sq(HurstIndex(h)));
    h = h < 0.95 ? h + 0.01 : 0.55;
  }
}
BENCHMARK(BM_SigmaSq);
