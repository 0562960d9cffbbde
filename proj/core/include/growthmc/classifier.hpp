#pragma once

#include <optional>
#include <string>

#include "growthmc/models.hpp"
#include "growthmc/transforms.hpp"

namespace growthmc {

// Recurrence regime of the chain:
//   transient            theta > 1
//   null_recurrent       lambda > 1 - theta
//   positive_recurrent   lambda < 1 - theta
//   boundary_untreated   lambda = 1 - theta or theta = 1 (within tolerance)
enum class Regime {
  Transient,
  NullRecurrent,
  PositiveRecurrent,
  BoundaryUntreated,
};

std::string regime_name(Regime r);

// Result of a numeric limit taken on the large-x grid {1e3, 1e4, 1e5, 1e6}:
// the last evaluation plus a stability flag (successive values within 1%).
struct LimitEstimate {
  double value = 0.0;
  bool converged = true;
};

struct ExponentBracket {
  double lo = 0.0;  // log-log slope of ell_alpha, the admissible lower edge
  double hi = 0.0;  // log-log slope of ell_beta, the admissible upper edge
};

struct TvRatePrediction {
  double alpha = 0.0;
  double slope = 0.0;  // asymptotic log-log slope of ell'_alpha: alpha/lambda - 1
  double eval(const TransformEngine& engine, double n) const {
    return engine.eval_ell_prime(alpha, n);
  }
};

struct ClassificationReport {
  double theta = 0.0;
  double lambda = 0.0;
  Regime regime = Regime::NullRecurrent;
  double tail_exponent_center = 0.0;  // (1 - theta) / lambda
  std::optional<ExponentBracket> bracket;
  std::optional<double> tv_rate_exponent;
  bool theta_converged = true;
  bool lambda_converged = true;
  bool markov = true;  // regime semantics require the Markov property
  std::string warning;
};

// theta = lim 2 x g(x) / sigma^2(x); exact per family.
double compute_theta(const GrowthModel& model);
// Numeric fallback for black-box moments.
LimitEstimate compute_theta_numeric(const GrowthModel& model);

// lambda = 1 - lim g'(x) x / g(x); closed form for power drifts, large-x
// grid otherwise.
double compute_lambda(const DriftSpec& drift);
LimitEstimate compute_lambda_numeric(const DriftSpec& drift);

// Regime verdict.  tol widens the refused boundary strip; defaults are
// 1e-9 for closed-form inputs and 1e-2 for numeric ones.
Regime classify(double theta, double lambda, double tol = 1e-9);

// The admissible tail-slope interval implied by the two-sided polynomial
// bounds, measured as log-log slopes of ell over a large window.  Requires
// 0 < alpha < 1 - theta < beta; lo < (1-theta)/lambda < hi always holds.
ExponentBracket predict_bracket(const TransformEngine& engine, double theta,
                                double alpha, double beta,
                                double window_lo = 1e3,
                                double window_hi = 1e6);

// Convergence-rate weight n -> ell'_alpha(n) for the positive recurrent
// case; requires lambda < alpha < 1 - theta.
TvRatePrediction predict_tv_rate(const TransformEngine& engine, double theta,
                                 double lambda, double alpha);

// Full report for a model at user-chosen (alpha, beta).
ClassificationReport classify_model(const GrowthModel& model, double alpha,
                                    double beta);

}  // namespace growthmc
