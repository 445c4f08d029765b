#include <hurst_sde/estimators.hpp>
#include <hurst_sde/fbm.hpp>
#include <hurst_sde/models.hpp>

#include <benchmark/benchmark.h>

using namespace hurst_sde;

static void BM_EstimateH1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = models::ModelSpec::verhulst(1.0, 0.5, 1.0);
  const auto x = models::simulate(model, fbm::generate_fbm(HurstIndex(0.7), n, 1.0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(estimators::estimate_h1(x, model.diffusion()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EstimateH1)->Range(1 << 9, 1 << 16);

static void BM_EstimateH2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto obs = models::sample_nested(models::ModelSpec::verhulst(1.0, 0.5, 1.0), HurstIndex(0.7), n, n * n, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(estimators::estimate_h2(obs));
}
BENCHMARK(BM_EstimateH2)->Arg(20)->Arg(50)->Arg(100);

static void BM_PhiInverse(benchmark::State& state) {
  double y = estimators::phi(4096, 1.0, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(estimators::phi_inv(4096, 1.0, y));
}
BENCHMARK(BM_PhiInverse);
