#include "growthmc/classifier.hpp"

#include <cmath>
#include <stdexcept>

#include "growthmc/errors.hpp"

namespace growthmc {

namespace {

constexpr double kGrid[] = {1e3, 1e4, 1e5, 1e6};

LimitEstimate grid_limit(double v0, double v1, double v2, double v3) {
  LimitEstimate est;
  est.value = v3;
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 0.01 * std::max({std::abs(a), std::abs(b), 1e-12});
  };
  est.converged = close(v0, v1) && close(v1, v2) && close(v2, v3);
  return est;
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Transient:
      return "transient";
    case Regime::NullRecurrent:
      return "null_recurrent";
    case Regime::PositiveRecurrent:
      return "positive_recurrent";
    case Regime::BoundaryUntreated:
      return "boundary_untreated";
  }
  return "unknown";
}

double compute_theta(const GrowthModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>)
          return 2.0 * m.c / m.d;
        if constexpr (std::is_same_v<T, BesselLikeWalk>) return -m.delta;
        if constexpr (std::is_same_v<T, CriticalGwi>)
          return 2.0 * m.immigration_mean / CriticalGwi::offspring_variance();
        if constexpr (std::is_same_v<T, StateDepGw>)
          return 2.0 * m.c / m.sigma2;
        if constexpr (std::is_same_v<T, NonMarkovR>) return 4.0 / (m.K * m.K);
      },
      model);
}

LimitEstimate compute_theta_numeric(const GrowthModel& model) {
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const double x = kGrid[i];
    v[i] = 2.0 * x * drift_mean(model, x) / drift_variance(model, x);
  }
  return grid_limit(v[0], v[1], v[2], v[3]);
}

double compute_lambda(const DriftSpec& drift) {
  if (const auto* p = std::get_if<PowerDrift>(&drift.family))
    return 1.0 - p->gamma;
  return compute_lambda_numeric(drift).value;
}

LimitEstimate compute_lambda_numeric(const DriftSpec& drift) {
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const double x = kGrid[i];
    v[i] = 1.0 - drift.derivative(x) * x / drift.eval(x);
  }
  return grid_limit(v[0], v[1], v[2], v[3]);
}

Regime classify(double theta, double lambda, double tol) {
  if (!std::isfinite(theta) || !std::isfinite(lambda))
    throw std::domain_error("classify: theta and lambda must be finite");
  if (theta > 1.0 + tol) return Regime::Transient;
  if (std::abs(theta - 1.0) <= tol) return Regime::BoundaryUntreated;
  if (std::abs(lambda - (1.0 - theta)) <= tol)
    return Regime::BoundaryUntreated;
  return lambda > 1.0 - theta ? Regime::NullRecurrent
                              : Regime::PositiveRecurrent;
}

ExponentBracket predict_bracket(const TransformEngine& engine, double theta,
                                double alpha, double beta, double window_lo,
                                double window_hi) {
  const double gap = 1.0 - theta;
  if (!(alpha > 0.0) || !(alpha < gap) || !(beta > gap))
    throw std::invalid_argument(
        "predict_bracket: need 0 < alpha < 1 - theta < beta");
  ExponentBracket b;
  b.lo = engine.log_slope_ell(alpha, window_lo, window_hi);
  b.hi = engine.log_slope_ell(beta, window_lo, window_hi);
  return b;
}

TvRatePrediction predict_tv_rate(const TransformEngine& engine, double theta,
                                 double lambda, double alpha) {
  if (!(alpha > lambda && alpha < 1.0 - theta))
    throw std::invalid_argument(
        "predict_tv_rate: alpha must lie in (lambda, 1 - theta)");
  (void)engine;
  TvRatePrediction pred;
  pred.alpha = alpha;
  pred.slope = alpha / lambda - 1.0;
  return pred;
}

ClassificationReport classify_model(const GrowthModel& model, double alpha,
                                    double beta) {
  ClassificationReport rep;
  rep.theta = compute_theta(model);
  const DriftSpec drift = drift_spec(model);
  rep.lambda = compute_lambda(drift);
  rep.markov = is_markov(model);

  const LimitEstimate theta_num = compute_theta_numeric(model);
  const LimitEstimate lambda_num = compute_lambda_numeric(drift);
  rep.theta_converged = theta_num.converged;
  rep.lambda_converged = lambda_num.converged;

  rep.regime = classify(rep.theta, rep.lambda);
  if (rep.lambda != 0.0)
    rep.tail_exponent_center = (1.0 - rep.theta) / rep.lambda;

  if (rep.regime == Regime::BoundaryUntreated) {
    rep.warning = "lambda equals 1 - theta (or theta equals 1): untreated "
                  "boundary, no tail bracket is predicted";
    return rep;
  }
  if (rep.regime == Regime::Transient) {
    rep.warning = "theta > 1: escape to infinity has positive probability; "
                  "hitting-time tail bounds do not apply";
    return rep;
  }
  if (!rep.markov)
    rep.warning = "model is not a Markov chain: the null/positive recurrence "
                  "verdict and TV rate require the Markov property and are "
                  "reported for the (theta, lambda) pair only";

  TransformEngine engine(drift);
  if (alpha > 0.0 && alpha < 1.0 - rep.theta && beta > 1.0 - rep.theta)
    rep.bracket = predict_bracket(engine, rep.theta, alpha, beta);
  if (rep.regime == Regime::PositiveRecurrent && rep.markov &&
      alpha > rep.lambda && alpha < 1.0 - rep.theta)
    rep.tv_rate_exponent =
        predict_tv_rate(engine, rep.theta, rep.lambda, alpha).slope;
  return rep;
}

}  // namespace growthmc
