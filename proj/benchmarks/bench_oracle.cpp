#include <benchmark/benchmark.h>

#include "growthmc/oracle.hpp"

using namespace growthmc;

static void BuildGwiKernel(benchmark::State& state) {
  const auto cap = static_cast<std::int32_t>(state.range(0));
  for (auto _ : state) {
    const TruncatedKernel kernel = build_kernel(CriticalGwi{0.5}, cap);
    benchmark::DoNotOptimize(kernel.rows.back().entries.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildGwiKernel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void ExactSurvivalBessel(benchmark::State& state) {
  const TruncatedKernel kernel =
      build_kernel(BesselLikeWalk{-0.5}, 1200, /*absorb_max=*/10);
  for (auto _ : state) {
    const SurvivalCurve curve =
        exact_survival(kernel, 50, static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(curve.values.back());
  }
}
BENCHMARK(ExactSurvivalBessel)->Arg(2000)->Arg(20000)
    ->Unit(benchmark::kMillisecond);

static void InvariantBirthDeath(benchmark::State& state) {
  const TruncatedKernel kernel = build_birth_death_kernel(0.3, 500);
  for (auto _ : state) {
    const InvariantResult inv = invariant_measure(kernel, 1e-10);
    benchmark::DoNotOptimize(inv.residual);
  }
}
BENCHMARK(InvariantBirthDeath)->Unit(benchmark::kMillisecond);
