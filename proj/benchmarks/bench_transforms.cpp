#include <benchmark/benchmark.h>

#include "growthmc/transforms.hpp"

using namespace growthmc;

static void EvalGClosed(benchmark::State& state) {
  TransformEngine engine(DriftSpec::power(0.25, 0.5));
  double x = 1.0;
  for (auto _ : state) {
    x += 1.0;
    if (x > 1e6) x = 1.0;
    benchmark::DoNotOptimize(engine.eval_G(x));
  }
}
BENCHMARK(EvalGClosed);

static void EvalGQuadrature(benchmark::State& state) {
  TransformEngine engine(DriftSpec::power(0.25, 0.5, false));
  double x = 1.0;
  for (auto _ : state) {
    x += 1.0;
    if (x > 1e6) x = 1.0;
    benchmark::DoNotOptimize(engine.eval_G(x));
  }
}
BENCHMARK(EvalGQuadrature);

static void InverseBisection(benchmark::State& state) {
  TransformEngine engine(DriftSpec::power(0.25, 0.5, false));
  double y = 0.0;
  for (auto _ : state) {
    y += 7.0;
    if (y > 1e4) y = 0.0;
    benchmark::DoNotOptimize(engine.eval_G_inverse(y));
  }
}
BENCHMARK(InverseBisection);
