#include <doctest.h>

#include <cmath>
#include <vector>

#include "growthmc/errors.hpp"
#include "growthmc/transforms.hpp"

using namespace growthmc;

namespace {

// Tabulated version of a power drift, dense in log-log where power laws are
// linear, so interpolation adds no error of its own.
DriftSpec tabulated_power(double c, double gamma, double x_lo = 1.0,
                          double x_hi = 100.0, int knots = 40) {
  std::vector<double> xs, gs;
  for (int i = 0; i < knots; ++i) {
    const double t = static_cast<double>(i) / (knots - 1);
    const double x = x_lo * std::pow(x_hi / x_lo, t);
    xs.push_back(x);
    gs.push_back(c * std::pow(x, gamma));
  }
  return DriftSpec::tabulated(xs, gs);
}

}  // namespace

TEST_CASE("eval_G closed forms") {
  TransformEngine unit(DriftSpec::power(1.0, 0.0));
  CHECK(unit.eval_G(5.0) == doctest::Approx(4.0).epsilon(1e-14));

  TransformEngine root(DriftSpec::power(0.5, 0.5));
  CHECK(root.eval_G(4.0) == doctest::Approx(4.0).epsilon(1e-14));

  TransformEngine recip(DriftSpec::power(1.0, -1.0));  // g(x) = 1/x
  CHECK(recip.eval_G(3.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("eval_G domain and integrability errors") {
  TransformEngine engine(DriftSpec::power(1.0, 0.0));
  CHECK_THROWS_AS(engine.eval_G(0.5), std::domain_error);
  CHECK_THROWS_AS(engine.eval_G_inverse(-1.0), std::domain_error);
  CHECK_THROWS_AS(DriftSpec::tabulated({1.0, 2.0, 3.0}, {1.0, 0.0, 1.0}),
                  ConfigError);
  CHECK_THROWS_AS(DriftSpec::tabulated({1.0, 2.0, 3.0}, {1.0, -0.5, 1.0}),
                  ConfigError);
}

TEST_CASE("tabulated drift quadrature tracks the closed form") {
  TransformEngine exact(DriftSpec::power(1.0, 0.3));
  TransformEngine tab(tabulated_power(1.0, 0.3));
  CHECK(std::abs(tab.eval_G(50.0) - exact.eval_G(50.0)) <=
        10.0 * tab.quad_tol());
}

TEST_CASE("closed form vs quadrature across gamma") {
  for (const double gamma : {-1.0, -0.5, 0.0, 0.5, 0.9}) {
    TransformEngine closed(DriftSpec::power(1.0, gamma));
    TransformEngine numeric(DriftSpec::power(1.0, gamma, false));
    for (int i = 0; i <= 20; ++i) {
      const double x = std::pow(100.0, i / 20.0);
      CHECK(std::abs(closed.eval_G(x) - numeric.eval_G(x)) <=
            10.0 * numeric.quad_tol());
    }
  }
}

TEST_CASE("eval_G_inverse closed forms and round trip") {
  TransformEngine unit(DriftSpec::power(1.0, 0.0));
  CHECK(unit.eval_G_inverse(0.0) == doctest::Approx(1.0));
  CHECK(unit.eval_G_inverse(4.0) == doctest::Approx(5.0).epsilon(1e-12));

  for (const bool closed : {true, false}) {
    TransformEngine engine(DriftSpec::power(0.7, 0.4, closed));
    for (const double y : {0.5, 7.0, 123.4}) {
      const double x = engine.eval_G_inverse(y);
      CHECK(std::abs(engine.eval_G(x) - y) <= engine.inv_tol());
    }
  }
}

TEST_CASE("round trip on a grid for tabulated and numeric drifts") {
  const std::vector<DriftSpec> specs = {
      DriftSpec::power(1.0, -0.5, false),
      tabulated_power(0.5, 0.5, 1.0, 1e4, 80)};
  for (const auto& spec : specs) {
    TransformEngine engine(spec);
    const double y_max = std::min(engine.eval_G(1000.0), 1e5);
    for (int i = 0; i <= 40; ++i) {
      const double y = y_max * i / 40.0;
      const double x = engine.eval_G_inverse(y);
      CHECK(std::abs(engine.eval_G(x) - y) <= engine.inv_tol());
    }
  }
}

TEST_CASE("monotonicity of G and its inverse") {
  TransformEngine engine(DriftSpec::power(0.5, 0.5, false));
  double prev_g = -1.0;
  double prev_inv = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double x = 1.0 + i * 3.3;
    const double g = engine.eval_G(x);
    CHECK(g > prev_g);
    prev_g = g;
    const double inv = engine.eval_G_inverse(i * 2.5);
    CHECK(inv >= prev_inv);
    prev_inv = inv;
  }
}

TEST_CASE("eval_ell values") {
  TransformEngine unit(DriftSpec::power(1.0, 0.0));
  CHECK(unit.eval_ell(2.0, 3.0) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(unit.eval_ell(0.37, 0.0) == doctest::Approx(1.0));
  TransformEngine root(DriftSpec::power(0.25, 0.5));
  CHECK(root.eval_ell(1.23, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(unit.eval_ell(-1.0, 2.0), std::domain_error);
}

TEST_CASE("ell growth exponent alpha/(1-gamma)") {
  TransformEngine engine(DriftSpec::power(0.25, 0.5));
  for (const double alpha : {0.3, 0.5, 1.1}) {
    const double slope = engine.log_slope_ell(alpha, 1e3, 1e6);
    CHECK(std::abs(slope - 2.0 * alpha) <= 0.02);
  }
}

TEST_CASE("eval_ell_prime values and finite-difference oracle") {
  TransformEngine unit(DriftSpec::power(1.0, 0.0));
  CHECK(unit.eval_ell_prime(1.0, 17.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.eval_ell_prime(2.0, 3.0) == doctest::Approx(8.0).epsilon(1e-12));

  TransformEngine engine(DriftSpec::power(0.5, 0.3));
  const double alpha = 0.4;
  for (const double n : {10.0, 100.0, 1000.0}) {
    const double h = std::max(1e-3, 1e-4 * n);
    const double fd =
        (engine.eval_ell(alpha, n + h) - engine.eval_ell(alpha, n - h)) /
        (2.0 * h);
    const double analytic = engine.eval_ell_prime(alpha, n);
    CHECK(std::abs(fd - analytic) / analytic <= 1e-6);
  }
}

TEST_CASE("log_slope_ell values") {
  TransformEngine unit(DriftSpec::power(1.0, 0.0));
  CHECK(std::abs(unit.log_slope_ell(0.5, 1e3, 1e6) - 0.5) <= 0.01);

  TransformEngine root(DriftSpec::power(0.25, 0.5));
  CHECK(std::abs(root.log_slope_ell(0.5, 1e3, 1e6) - 1.0) <= 0.02);

  // Bessel drift g(x) = |delta|/(2x) with delta = -0.5, tabulated: the ell
  // slope is alpha/2.
  TransformEngine bessel(tabulated_power(0.25, -1.0, 1.0, 2000.0, 60));
  CHECK(std::abs(bessel.log_slope_ell(0.5, 1e3, 1e6) - 0.25) <= 0.02);

  CHECK_THROWS_AS(unit.log_slope_ell(0.5, 10.0, 10.0), std::domain_error);
}

TEST_CASE("ell is ultimately concave below lambda and convex above") {
  for (const double gamma : {0.0, 0.5, -0.5}) {
    const double lambda = 1.0 - gamma;
    TransformEngine engine(DriftSpec::power(1.0, gamma));
    for (const double alpha : {0.5 * lambda, 1.5 * lambda}) {
      const bool expect_concave = alpha < lambda;
      for (double a = 1e3; a <= 1e6; a *= 2.0) {
        const double b = 2.0 * a;
        const double mid = 0.5 * (a + b);
        const double chord =
            0.5 * (engine.eval_ell(alpha, a) + engine.eval_ell(alpha, b));
        const double bow = engine.eval_ell(alpha, mid);
        if (expect_concave)
          CHECK(bow >= chord * (1.0 - 1e-12));
        else
          CHECK(chord >= bow * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("x / (G(x) g(x)) approaches lambda across the decade grid") {
  for (const double gamma : {-1.0, -0.5, 0.0, 0.5, 0.9}) {
    const double lambda = 1.0 - gamma;
    TransformEngine engine(DriftSpec::power(1.0, gamma));
    double first_err = 0.0;
    double last_err = 0.0;
    bool first = true;
    for (const double x : {1e3, 1e4, 1e5, 1e6}) {
      const double ratio = x / (engine.eval_G(x) * engine.drift().eval(x));
      const double err = std::abs(ratio - lambda);
      if (first) {
        first_err = err;
        first = false;
      }
      last_err = err;
    }
    CHECK(last_err < first_err);
  }
}

TEST_CASE("doubling bound A_r ell(x) >= ell(r x)") {
  for (const double gamma : {0.0, 0.5}) {
    const double lambda = 1.0 - gamma;
    TransformEngine engine(DriftSpec::power(1.0, gamma));
    for (const double r : {2.0, 10.0}) {
      const double a_r = std::pow(4.0 * r, 2.0 / lambda);
      for (const double alpha : {0.5, 1.5}) {
        for (double x = 1e3; x <= 1e6; x *= 4.0) {
          CHECK(a_r * engine.eval_ell(alpha, x) >=
                engine.eval_ell(alpha, r * x));
        }
      }
    }
  }
}
