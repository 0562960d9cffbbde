#pragma once

#include <utility>
#include <vector>

#include "growthmc/drift.hpp"

namespace growthmc {

// Evaluator for the space/time transforms of a positive drift g:
//
//   G(x)        = integral of 1/g over [1, x]          (strictly increasing)
//   G_inverse   = the inverse map on [0, inf)
//   ell(a, n)   = (G_inverse(n))^a
//   ell_prime   = a * g(G_inverse(n)) * (G_inverse(n))^(a-1)
//
// Power drifts use closed forms unless the spec disables them; everything
// else goes through adaptive Simpson quadrature seeded by a monotone anchor
// cache, and bracketed bisection for inversion.  Engines are immutable after
// construction (the cache is built eagerly), so one engine may be shared
// read-only across worker threads.
class TransformEngine {
 public:
  explicit TransformEngine(DriftSpec drift, double quad_tol = 1e-10,
                           double inv_tol = 1e-9);

  const DriftSpec& drift() const { return drift_; }
  double quad_tol() const { return quad_tol_; }
  double inv_tol() const { return inv_tol_; }

  // G(x) for x >= 1.  Throws std::domain_error below 1.
  double eval_G(double x) const;

  // x >= 1 with |G(x) - y| <= inv_tol, for y >= 0.
  double eval_G_inverse(double y) const;

  // (G_inverse(n))^alpha, alpha > 0, n >= 0.
  double eval_ell(double alpha, double n) const;

  // d/dn ell(alpha, n) = alpha * g(G_inverse(n)) * G_inverse(n)^(alpha-1).
  double eval_ell_prime(double alpha, double n) const;

  // Log-log slope of ell(alpha, .) between n_lo and n_hi (1 <= n_lo < n_hi).
  // Converges to alpha / lambda as the window moves out.
  double log_slope_ell(double alpha, double n_lo, double n_hi) const;

 private:
  double integrate(double a, double b, double tol) const;
  std::pair<double, double> anchor_below(double x) const;

  DriftSpec drift_;
  double quad_tol_;
  double inv_tol_;
  // Strictly increasing (x, G(x)) pairs at x = 2^k, built once.
  std::vector<std::pair<double, double>> cache_;
};

}  // namespace growthmc
