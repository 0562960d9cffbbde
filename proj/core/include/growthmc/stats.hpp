#pragma once

#include <cstdint>
#include <string>

#include "growthmc/classifier.hpp"
#include "growthmc/montecarlo.hpp"

namespace growthmc {

// Least-squares power-law fit of a survival curve: log surv regressed on
// log n over the usable points of a window.  slope is reported as a positive
// decay exponent.
struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;  // log surv at log n = 0
  double stderr_ = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points_used = 0;
  double min_surv_used = 1.0;
};

enum class SandwichVerdict { Pass, Fail, Marginal };

const char* sandwich_verdict_name(SandwichVerdict v);

// Fits over n in [window_lo, window_hi].  A point is usable when it lies in
// the window, has surv > 0, is not censor-biased, and (for Monte Carlo
// estimates) has at least 50 expected survivors; exact curves
// (trajectories == 0) skip the count rule.  Throws InsufficientPointsError
// below 5 usable points.
TailFit fit_tail(const SurvivalEstimate& est, double window_lo,
                 double window_hi);

// PASS when [slope - 2 stderr, slope + 2 stderr] lies inside (lo, hi),
// FAIL when the two intervals are disjoint, MARGINAL otherwise.
SandwichVerdict sandwich_verdict(const TailFit& fit,
                                 const ExponentBracket& bracket);

}  // namespace growthmc
