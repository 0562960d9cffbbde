#include "growthmc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "growthmc/errors.hpp"

namespace growthmc {

namespace {

constexpr int kAnchorCount = 42;  // anchors at 1, 2, 4, ..., 2^41

struct SimpsonWork {
  const DriftSpec* drift;
  int max_depth;

  double f(double x) const { return 1.0 / drift->eval(x); }

  // Classic adaptive Simpson with the /15 error estimate.  tol is absolute
  // with a relative floor so that huge integrals (G ~ x^2 for gamma near -1)
  // do not recurse into the rounding noise of double.
  double recurse(double a, double m, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    const double floor_tol = 4e-16 * std::abs(left + right);
    if (std::abs(err) <= std::max(tol, floor_tol) || depth >= max_depth)
      return left + right + err;
    return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double run(double a, double b, double tol) const {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, m, b, fa, fm, fb, whole, tol, 0);
  }
};

}  // namespace

TransformEngine::TransformEngine(DriftSpec drift, double quad_tol,
                                 double inv_tol)
    : drift_(std::move(drift)), quad_tol_(quad_tol), inv_tol_(inv_tol) {
  if (!(quad_tol_ > 0.0) || !(inv_tol_ > 0.0))
    throw ConfigError("TransformEngine: tolerances must be positive");
  if (drift_.has_closed_form()) return;
  // Eager anchor table at powers of two.  Each segment gets a slice of the
  // budget so the chained sum stays within quad_tol overall.
  cache_.reserve(kAnchorCount);
  cache_.emplace_back(1.0, 0.0);
  const double seg_tol = quad_tol_ / 64.0;
  double x = 1.0;
  double acc = 0.0;
  for (int k = 1; k < kAnchorCount; ++k) {
    const double next = x * 2.0;
    acc += integrate(x, next, seg_tol);
    cache_.emplace_back(next, acc);
    x = next;
  }
}

double TransformEngine::integrate(double a, double b, double tol) const {
  SimpsonWork work{&drift_, 48};
  return work.run(a, b, tol);
}

std::pair<double, double> TransformEngine::anchor_below(double x) const {
  auto it = std::upper_bound(
      cache_.begin(), cache_.end(), x,
      [](double v, const std::pair<double, double>& e) { return v < e.first; });
  if (it == cache_.begin()) return {1.0, 0.0};
  return *(it - 1);
}

double TransformEngine::eval_G(double x) const {
  if (!(x >= 1.0)) throw std::domain_error("eval_G: x must be >= 1");
  if (drift_.has_closed_form()) {
    const auto& p = std::get<PowerDrift>(drift_.family);
    const double e = 1.0 - p.gamma;
    return (std::pow(x, e) - 1.0) / (p.c * e);
  }
  const auto [xa, ga] = anchor_below(x);
  return ga + integrate(xa, x, quad_tol_);
}

double TransformEngine::eval_G_inverse(double y) const {
  if (!(y >= 0.0)) throw std::domain_error("eval_G_inverse: y must be >= 0");
  if (y == 0.0) return 1.0;
  if (drift_.has_closed_form()) {
    const auto& p = std::get<PowerDrift>(drift_.family);
    const double e = 1.0 - p.gamma;
    return std::pow(1.0 + p.c * e * y, 1.0 / e);
  }
  // Bracket from the anchor table, extending exponentially past its end if
  // the target lies beyond, then bisect on the strictly increasing G.
  double lo = 1.0, glo = 0.0;
  double hi = cache_.back().first, ghi = cache_.back().second;
  auto it = std::lower_bound(cache_.begin(), cache_.end(), y,
                             [](const std::pair<double, double>& e, double v) {
                               return e.second < v;
                             });
  if (it != cache_.end()) {
    hi = it->first;
    ghi = it->second;
    if (it != cache_.begin()) {
      lo = (it - 1)->first;
      glo = (it - 1)->second;
    }
  } else {
    lo = hi;
    glo = ghi;
    while (ghi < y) {
      lo = hi;
      glo = ghi;
      hi *= 2.0;
      ghi += integrate(lo, hi, quad_tol_);
    }
  }
  for (int iter = 0; iter < 200; ++iter) {
    if (ghi - glo <= inv_tol_) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at machine resolution
    const double gm = glo + integrate(lo, mid, quad_tol_);
    if (gm < y) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  return 0.5 * (lo + hi);
}

double TransformEngine::eval_ell(double alpha, double n) const {
  if (!(alpha > 0.0)) throw std::domain_error("eval_ell: alpha must be > 0");
  return std::pow(eval_G_inverse(n), alpha);
}

double TransformEngine::eval_ell_prime(double alpha, double n) const {
  if (!(alpha > 0.0))
    throw std::domain_error("eval_ell_prime: alpha must be > 0");
  const double x = eval_G_inverse(n);
  return alpha * drift_.eval(x) * std::pow(x, alpha - 1.0);
}

double TransformEngine::log_slope_ell(double alpha, double n_lo,
                                      double n_hi) const {
  if (!(n_lo >= 1.0 && n_hi > n_lo))
    throw std::domain_error("log_slope_ell: need 1 <= n_lo < n_hi");
  return (std::log(eval_ell(alpha, n_hi)) - std::log(eval_ell(alpha, n_lo))) /
         (std::log(n_hi) - std::log(n_lo));
}

}  // namespace growthmc
