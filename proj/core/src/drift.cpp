#include "growthmc/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "growthmc/errors.hpp"

namespace growthmc {

DriftSpec DriftSpec::power(double c, double gamma, bool closed_form) {
  if (!(c > 0.0)) throw ConfigError("PowerDrift: c must be positive");
  if (!(gamma >= -1.0 && gamma < 1.0))
    throw ConfigError("PowerDrift: gamma must lie in [-1, 1)");
  DriftSpec spec;
  spec.family = PowerDrift{c, gamma};
  spec.closed_form = closed_form;
  return spec;
}

DriftSpec DriftSpec::tabulated(std::vector<double> x, std::vector<double> g) {
  if (x.size() < 2 || x.size() != g.size())
    throw ConfigError("TabulatedDrift: need at least two (x, g) knots");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(g[i] > 0.0))
      throw ConfigError("TabulatedDrift: g must be strictly positive");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw ConfigError("TabulatedDrift: x knots must be strictly increasing");
  }
  if (!(x.front() > 0.0))
    throw ConfigError("TabulatedDrift: knots must be positive");
  DriftSpec spec;
  spec.family = TabulatedDrift{std::move(x), std::move(g)};
  spec.closed_form = false;
  return spec;
}

namespace {

double tabulated_eval(const TabulatedDrift& tab, double x) {
  const auto& xs = tab.x;
  const auto& gs = tab.g;
  const std::size_t n = xs.size();
  const double lx = std::log(x);
  std::size_t i;
  if (x <= xs.front()) {
    i = 0;
  } else if (x >= xs.back()) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) -
        1;
  }
  const double lx0 = std::log(xs[i]);
  const double lx1 = std::log(xs[i + 1]);
  const double lg0 = std::log(gs[i]);
  const double lg1 = std::log(gs[i + 1]);
  const double t = (lx - lx0) / (lx1 - lx0);
  return std::exp(lg0 + t * (lg1 - lg0));
}

}  // namespace

double DriftSpec::eval(double x) const {
  if (!(x > 0.0)) throw std::domain_error("drift: x must be positive");
  if (const auto* p = std::get_if<PowerDrift>(&family))
    return p->c * std::pow(x, p->gamma);
  return tabulated_eval(std::get<TabulatedDrift>(family), x);
}

double DriftSpec::derivative(double x) const {
  if (const auto* p = std::get_if<PowerDrift>(&family))
    return p->c * p->gamma * std::pow(x, p->gamma - 1.0);
  const double h = std::max(1e-5 * x, 1e-7);
  return (eval(x + h) - eval(std::max(x - h, 1e-12))) /
         (x + h - std::max(x - h, 1e-12));
}

}  // namespace growthmc
