#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace growthmc {

// g(x) = c * x^gamma with c > 0 and gamma in [-1, 1).  gamma < 1 keeps
// g(x) = o(x); gamma = -1 covers reciprocal drifts such as the Bessel-like
// walk's |delta| / (2x).
struct PowerDrift {
  double c = 1.0;
  double gamma = 0.0;
};

// Positive drift sampled on a strictly increasing grid.  Evaluation
// interpolates piecewise-linearly in log-log coordinates and extrapolates
// beyond the end knots with the slope of the two nearest knots, which is
// exact for power-law tails.
struct TabulatedDrift {
  std::vector<double> x;  // strictly increasing, x.front() <= 1
  std::vector<double> g;  // strictly positive
};

// The drift of a growth model together with the closed-form switch: when
// closed_form is false a PowerDrift is treated as a numeric black box
// (quadrature and bisection instead of the analytic transform formulas).
struct DriftSpec {
  std::variant<PowerDrift, TabulatedDrift> family = PowerDrift{};
  bool closed_form = true;

  static DriftSpec power(double c, double gamma, bool closed_form = true);
  static DriftSpec tabulated(std::vector<double> x, std::vector<double> g);

  bool has_closed_form() const {
    return closed_form && std::holds_alternative<PowerDrift>(family);
  }

  double eval(double x) const;        // g(x), x >= 1
  double derivative(double x) const;  // g'(x); central difference if tabulated
};

}  // namespace growthmc
