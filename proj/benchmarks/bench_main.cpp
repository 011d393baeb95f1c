#include <benchmark/benchmark.h>

#include "stablediff/asymptotics.hpp"
#include "stablediff/local_time.hpp"
#include "stablediff/pathsim.hpp"
#include "stablediff/presets.hpp"
#include "stablediff/stable.hpp"
#include "stablediff/validate.hpp"

using namespace stablediff;

static void BM_ScaleFunction(benchmark::State& state) {
  const Preset p = make_preset("kinetic(3)");
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.model.scale(x));
    x = x > 1e3 ? 0.1 : x * 1.7;
  }
}
BENCHMARK(BM_ScaleFunction);

static void BM_ClassifyAndLaw(benchmark::State& state) {
  const Preset p = make_preset("kinetic(3)");
  for (auto _ : state) {
    const RegimeReport r = classify_regime(p.model, p.f, p.claim);
    benchmark::DoNotOptimize(limit_law(r, p.model, p.f).sigma);
  }
}
BENCHMARK(BM_ClassifyAndLaw)->Unit(benchmark::kMillisecond);

static void BM_CmsSampling(benchmark::State& state) {
  const StableParams p = StableSpec{1.5, 1, -1}.params();
  for (auto _ : state) benchmark::DoNotOptimize(sample_stable(p, 1, std::size_t(state.range(0)), 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CmsSampling)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_EulerPath(benchmark::State& state) {
  const Preset p = make_preset("kinetic(3)");
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(p.model, 100, 0.01, 1, k++).x.back());
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_EulerPath)->Unit(benchmark::kMillisecond);

static void BM_TimeChangeSample(benchmark::State& state) {
  const Preset p = make_preset("kinetic(3)");
  const LimitLaw law = limit_law(classify_regime(p.model, p.f, p.claim), p.model, p.f);
  SimConfig cfg;
  cfg.scheme = Scheme::TimeChange;
  cfg.n_paths = 50;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(rescaled_functional(p.model, p.f, law, cfg).values);
}
BENCHMARK(BM_TimeChangeSample)->Unit(benchmark::kMillisecond);

static void BM_BrownianGrid(benchmark::State& state) {
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_brownian(1e-5, 100000, 7, k++).local0.back());
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_BrownianGrid)->Unit(benchmark::kMillisecond);

static void BM_ExcursionFunctional(benchmark::State& state) {
  ExcursionConfig cfg;
  cfg.threads = 1;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stable_via_excursions(StableSpec{1.5, 1, -1}, {1.0}, 50, seed++, cfg).values);
  }
}
BENCHMARK(BM_ExcursionFunctional)->Unit(benchmark::kMillisecond);

static void BM_EcfAndAlpha(benchmark::State& state) {
  const auto x = sample_stable(StableParams{4.0 / 3, 1, 0, 0}, 1, 2000, 5);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_alpha(x, 1, 50).alpha);
}
BENCHMARK(BM_EcfAndAlpha)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
