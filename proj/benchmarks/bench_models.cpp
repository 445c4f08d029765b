#include <hurst_sde/fbm.hpp>
#include <hurst_sde/harness.hpp>
#include <hurst_sde/models.hpp>

#include <benchmark/benchmark.h>

using namespace hurst_sde;

static void BM_VerhulstExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto b = fbm::generate_fbm(HurstIndex(0.7), n, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(models::verhulst_exact(1.0, 0.5, 1.0, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_VerhulstExact)->Range(1 << 10, 1 << 18);

static void BM_Euler(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = models::ModelSpec::generic(ScalarFunction::parse("logistic:1"), ScalarFunction::parse("linear:0.5"), 1.0);
  const auto b = fbm::generate_fbm(HurstIndex(0.7), n, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(models::simulate_euler(model, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Euler)->Range(1 << 10, 1 << 18);

static void BM_ExperimentH1(benchmark::State& state) {
  harness::ExperimentConfig c;
  c.n = 1024;
  c.replications = 16;
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_experiment(c, {.threads = 1, .write_files = false}));
}
BENCHMARK(BM_ExperimentH1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
