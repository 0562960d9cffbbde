#include <benchmark/benchmark.h>

#include "growthmc/models.hpp"
#include "growthmc/montecarlo.hpp"

using namespace growthmc;

static void StepPowerDrift(benchmark::State& state) {
  const GrowthModel model = PowerDriftChain{0.25, 0.0, 1.0};
  RngStream rng(1, 0);
  double history[1] = {200.0};
  for (auto _ : state) {
    history[0] = std::max(1.0, step(model, history, rng));
    benchmark::DoNotOptimize(history[0]);
  }
}
BENCHMARK(StepPowerDrift);

static void StepBessel(benchmark::State& state) {
  const GrowthModel model = BesselLikeWalk{-0.5};
  RngStream rng(1, 0);
  double history[1] = {50.0};
  for (auto _ : state) {
    history[0] = std::max(1.0, step(model, history, rng));
    benchmark::DoNotOptimize(history[0]);
  }
}
BENCHMARK(StepBessel);

static void StepCriticalGwi(benchmark::State& state) {
  const GrowthModel model = CriticalGwi{0.5};
  RngStream rng(1, 0);
  double history[1] = {static_cast<double>(state.range(0))};
  for (auto _ : state) {
    const double next = step(model, history, rng);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(StepCriticalGwi)->Arg(10)->Arg(100)->Arg(1000);

static void StepStateDepGw(benchmark::State& state) {
  const GrowthModel model = StateDepGw{0.3, 1.2, {}};
  RngStream rng(1, 0);
  double history[1] = {static_cast<double>(state.range(0))};
  for (auto _ : state) {
    const double next = step(model, history, rng);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(StepStateDepGw)->Arg(10)->Arg(100)->Arg(1000);

static void SurvivalBessel(benchmark::State& state) {
  const GrowthModel model = BesselLikeWalk{-0.5};
  TrajectoryConfig cfg;
  cfg.x0 = 50.0;
  cfg.threshold = 10.0;
  cfg.horizon = 2000;
  cfg.seed = 3;
  const auto grid = geometric_grid(10, 2000, 20);
  for (auto _ : state) {
    const SurvivalEstimate est =
        estimate_survival(model, cfg, static_cast<std::uint64_t>(state.range(0)),
                          grid, 0);
    benchmark::DoNotOptimize(est.surv[0]);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SurvivalBessel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
