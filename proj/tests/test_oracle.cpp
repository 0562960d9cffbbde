#include <doctest.h>

#include <cmath>
#include <numeric>

#include "growthmc/errors.hpp"
#include "growthmc/oracle.hpp"
#include "growthmc/transforms.hpp"

using namespace growthmc;

namespace {

double row_mass(const SparseRow& row) {
  double m = row.overflow;
  for (const auto& [col, p] : row.entries) m += p;
  return m;
}

double row_entry(const SparseRow& row, std::int32_t col) {
  for (const auto& [c, p] : row.entries)
    if (c == col) return p;
  return 0.0;
}

}  // namespace

TEST_CASE("bessel kernel rows") {
  const TruncatedKernel kernel =
      build_kernel(BesselLikeWalk{-0.5}, 64, /*absorb_max=*/-1);
  CHECK(row_entry(kernel.rows[1], 2) == doctest::Approx(0.625));
  CHECK(row_entry(kernel.rows[1], 0) == doctest::Approx(0.375));
  CHECK(row_entry(kernel.rows[0], 1) == doctest::Approx(1.0));
  for (const auto& row : kernel.rows)
    CHECK(std::abs(row_mass(row) - 1.0) <= 1e-12);
}

TEST_CASE("GWI kernel rows") {
  const TruncatedKernel kernel = build_kernel(CriticalGwi{0.5}, 512);
  // row 0 is the immigration law itself
  CHECK(row_entry(kernel.rows[0], 0) == doctest::Approx(std::exp(-0.5)));
  CHECK(row_entry(kernel.rows[0], 1) ==
        doctest::Approx(0.5 * std::exp(-0.5)));
  // row 1 mass at zero: P(no offspring) * P(no immigrants)
  CHECK(row_entry(kernel.rows[1], 0) ==
        doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-12));
  for (std::int32_t x = 0; x <= 256; ++x)
    CHECK(std::abs(row_mass(kernel.rows[x]) - 1.0) <= 1e-12);
}

TEST_CASE("state-dependent GW kernel rows") {
  const TruncatedKernel kernel = build_kernel(StateDepGw{0.3, 1.2, {}}, 256);
  CHECK(row_entry(kernel.rows[0], 0) == doctest::Approx(1.0));  // absorbing
  // extinction is reachable in one step from every small state
  for (std::int32_t x = 1; x <= 10; ++x)
    CHECK(row_entry(kernel.rows[x], 0) > 0.0);
  for (std::int32_t x = 0; x <= 128; ++x)
    CHECK(std::abs(row_mass(kernel.rows[x]) - 1.0) <= 1e-12);
  // row means match x + c exactly (mass is far from the cap for small x)
  for (std::int32_t x = 1; x <= 32; ++x) {
    double mean = 0.0;
    for (const auto& [col, p] : kernel.rows[x].entries)
      mean += static_cast<double>(col) * p;
    CHECK(mean == doctest::Approx(static_cast<double>(x) + 0.3).epsilon(1e-9));
  }
}

TEST_CASE("kernel caps and validation") {
  CHECK_THROWS_AS(build_kernel(CriticalGwi{0.5}, 1), ConfigError);
  CHECK_THROWS_AS(build_kernel(PowerDriftChain{0.25, 0.0, 1.0}, 64),
                  ConfigError);
  // jumps far beyond the cap: a bulk row loses most of its mass
  CHECK_THROWS_AS(build_discrete_power_kernel(1.0, 0.9, 100.0, 8,
                                              BoundaryPolicy::TrackOverflow),
                  CapError);
}

TEST_CASE("symmetric walk survival matches path enumeration") {
  const TruncatedKernel kernel =
      build_kernel(BesselLikeWalk{0.0}, 32, /*absorb_max=*/0);
  const SurvivalCurve curve = exact_survival(kernel, 1, 3);
  REQUIRE(curve.values.size() == 4);
  CHECK(curve.values[0] == doctest::Approx(1.0));
  CHECK(curve.values[1] == doctest::Approx(0.5));
  CHECK(curve.values[2] == doctest::Approx(0.5));
  CHECK(curve.values[3] == doctest::Approx(0.375));
  CHECK(curve.overflow_bound <= 1e-12);
}

TEST_CASE("exact survival is one at n = 0 and non-increasing") {
  const TruncatedKernel kernel =
      build_kernel(BesselLikeWalk{-0.5}, 256, /*absorb_max=*/2);
  const SurvivalCurve curve = exact_survival(kernel, 20, 500);
  CHECK(curve.values[0] == 1.0);
  for (std::size_t n = 1; n < curve.values.size(); ++n) {
    CHECK(curve.values[n] <= curve.values[n - 1] + 1e-15);
    CHECK(curve.values[n] >= 0.0);
    CHECK(curve.values[n] <= 1.0);
  }
}

TEST_CASE("exact survival cap error") {
  // Walk with the absorbing set far below and a cap the mass certainly
  // reaches: the accumulated overflow must trip the accuracy guard.
  const TruncatedKernel kernel =
      build_kernel(BesselLikeWalk{0.0}, 16, /*absorb_max=*/0);
  CHECK_THROWS_AS(exact_survival(kernel, 12, 2000, 1e-9), CapError);
}

TEST_CASE("invariant measure of the birth-death fixture") {
  const TruncatedKernel kernel = build_birth_death_kernel(0.3, 80);
  const InvariantResult inv = invariant_measure(kernel, 1e-13);
  CHECK(inv.converged);
  CHECK(inv.residual <= 1e-13);
  CHECK(inv.overflow_bound == 0.0);
  // detailed balance flux pi(x) p - pi(x+1) (1-p) vanishes to 1e-10
  for (std::int32_t x = 0; x < 80; ++x)
    CHECK(std::abs(inv.pi[x] * 0.3 - inv.pi[x + 1] * 0.7) <= 1e-10);
  // and the measure is the geometric closed form
  const double r = 3.0 / 7.0;
  const double norm = (1.0 - r) / (1.0 - std::pow(r, 81.0));
  for (std::int32_t x = 0; x <= 80; ++x)
    CHECK(std::abs(inv.pi[x] - norm * std::pow(r, x)) <= 1e-10);
  const double total = std::accumulate(inv.pi.begin(), inv.pi.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical-rows kernel reaches its invariant in one step") {
  TruncatedKernel kernel;
  kernel.cap = 3;
  kernel.absorb_max = -1;
  SparseRow q;
  q.entries = {{0, 0.4}, {1, 0.3}, {2, 0.2}, {3, 0.1}};
  kernel.rows = {q, q, q, q};
  const InvariantResult inv = invariant_measure(kernel, 1e-14);
  CHECK(inv.converged);
  CHECK(inv.pi[0] == doctest::Approx(0.4));
  CHECK(inv.pi[3] == doctest::Approx(0.1));

  const TvDecayResult tv = tv_decay(kernel, inv.pi, 2, {1, 2, 5});
  for (const auto& p : tv.points) CHECK(p.tv <= 1e-14);
}

TEST_CASE("tv distance decreases along the birth-death grid") {
  const TruncatedKernel kernel = build_birth_death_kernel(0.3, 80);
  const InvariantResult inv = invariant_measure(kernel, 1e-12);
  const std::vector<std::uint64_t> grid = {1,  2,   5,   10,  20,
                                           50, 100, 200, 400};
  const TvDecayResult tv = tv_decay(kernel, inv.pi, 20, grid);
  for (std::size_t i = 1; i < tv.points.size(); ++i)
    CHECK(tv.points[i].tv <= tv.points[i - 1].tv + 1e-12);
  CHECK(tv.points.back().tv <= 1e-3);
  CHECK(tv.overflow_bound == 0.0);
}

TEST_CASE("discrete power fixture has exact conditional moments") {
  const double c = 0.25, gamma = 0.7, d = 1.0;
  const TruncatedKernel kernel =
      build_discrete_power_kernel(c, gamma, d, 4096);
  for (const std::int32_t x : {16, 64, 256, 1024}) {
    double mean = 0.0, second = 0.0;
    for (const auto& [col, p] : kernel.rows[x].entries) {
      const double dx = static_cast<double>(col - x);
      mean += dx * p;
      second += dx * dx * p;
    }
    const double xd = static_cast<double>(x);
    CHECK(mean == doctest::Approx(c * std::pow(xd, gamma)).epsilon(1e-10));
    CHECK(second - mean * mean ==
          doctest::Approx(d * std::pow(xd, 1.0 + gamma)).epsilon(1e-10));
  }
  for (const auto& row : kernel.rows) {
    CHECK(std::abs(row_mass(row) - 1.0) <= 1e-12);
    CHECK(row.overflow == 0.0);  // reflecting boundary
  }
}

TEST_CASE("random-parameter kernels stay row-stochastic") {
  RngStream rng(2026, 0);
  for (int trial = 0; trial < 12; ++trial) {
    const double c = 0.1 + 0.9 * rng.uniform01();
    TruncatedKernel kernel;
    switch (trial % 3) {
      case 0:
        kernel = build_kernel(CriticalGwi{c}, 192);
        break;
      case 1:
        kernel = build_kernel(StateDepGw{c, 0.3 + 1.5 * rng.uniform01(), {}},
                              192);
        break;
      default:
        kernel = build_kernel(BesselLikeWalk{-rng.uniform01() * 0.9}, 192);
        break;
    }
    for (const auto& row : kernel.rows)
      CHECK(std::abs(row_mass(row) - 1.0) <= 1e-12);
  }
}

TEST_CASE("weighted tv decay of the positive-recurrent fixture") {
  // Small-cap version of the verification run: theta = 0.5, lambda = 0.3,
  // alpha in (lambda, 1 - theta).
  const TruncatedKernel kernel =
      build_discrete_power_kernel(0.25, 0.7, 1.0, 2000);
  const InvariantResult inv = invariant_measure(kernel, 1e-10);
  CHECK(inv.converged);
  TransformEngine engine(DriftSpec::power(0.25, 0.7));
  const double alpha = 0.4;
  const std::vector<std::uint64_t> grid = {100, 400, 1600, 4000};
  std::vector<double> weights;
  for (const auto n : grid)
    weights.push_back(engine.eval_ell_prime(alpha, static_cast<double>(n)));
  const TvDecayResult tv = tv_decay(kernel, inv.pi, 50, grid, weights);
  CHECK(tv.overflow_bound == 0.0);
  CHECK(tv.points.front().weighted >= 10.0 * tv.points.back().weighted);
}
