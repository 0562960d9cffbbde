#include "growthmc/stats.hpp"

#include <cmath>
#include <vector>

#include "growthmc/errors.hpp"

namespace growthmc {

const char* sandwich_verdict_name(SandwichVerdict v) {
  switch (v) {
    case SandwichVerdict::Pass:
      return "PASS";
    case SandwichVerdict::Fail:
      return "FAIL";
    case SandwichVerdict::Marginal:
      return "MARGINAL";
  }
  return "MARGINAL";
}

TailFit fit_tail(const SurvivalEstimate& est, double window_lo,
                 double window_hi) {
  if (!(window_lo > 0.0 && window_hi > window_lo))
    throw ConfigError("fit_tail: bad window");
  std::vector<double> lx, ly;
  double min_surv = 1.0;
  for (std::size_t i = 0; i < est.n_grid.size(); ++i) {
    const double n = static_cast<double>(est.n_grid[i]);
    if (n < window_lo || n > window_hi) continue;
    const double s = est.surv[i];
    if (!(s > 0.0)) continue;
    if (est.trajectories > 0) {
      if (s * static_cast<double>(est.trajectories) < 50.0) continue;
      if (est.censor_biased(i)) continue;
    }
    lx.push_back(std::log(n));
    ly.push_back(std::log(s));
    min_surv = std::min(min_surv, s);
  }
  const std::size_t m = lx.size();
  if (m < 5)
    throw InsufficientPointsError(
        "fit_tail: only " + std::to_string(m) +
        " usable points in the window (need 5); widen the window or add "
        "trajectories");

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_x += lx[i];
    mean_y += ly[i];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = lx[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (ly[i] - mean_y);
  }
  const double beta = sxy / sxx;  // slope of log surv on log n (negative)
  const double alpha = mean_y - beta * mean_x;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (alpha + beta * lx[i]);
    rss += r * r;
  }
  TailFit fit;
  fit.slope = -beta;
  fit.intercept = alpha;
  fit.stderr_ =
      m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.points_used = m;
  fit.min_surv_used = min_surv;
  return fit;
}

SandwichVerdict sandwich_verdict(const TailFit& fit,
                                 const ExponentBracket& bracket) {
  const double lo = fit.slope - 2.0 * fit.stderr_;
  const double hi = fit.slope + 2.0 * fit.stderr_;
  if (lo > bracket.lo && hi < bracket.hi) return SandwichVerdict::Pass;
  if (hi <= bracket.lo || lo >= bracket.hi) return SandwichVerdict::Fail;
  return SandwichVerdict::Marginal;
}

}  // namespace growthmc
