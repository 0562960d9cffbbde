#pragma once

#include <cstdint>
#include <vector>

#include "growthmc/models.hpp"
#include "growthmc/transforms.hpp"

namespace growthmc {

// Empirical survival curve of a hitting time.  surv[i] estimates
// P(tau > n_grid[i]); censored trajectories (no hit before the horizon)
// count as surviving at every grid point, and the censored count is carried
// so downstream fits can see how much of the curve is horizon-limited.
struct SurvivalEstimate {
  std::vector<std::uint64_t> n_grid;
  std::vector<double> surv;
  std::vector<double> ci_half;  // 95% binomial half-widths
  std::uint64_t trajectories = 0;
  std::uint64_t censored = 0;
  std::uint64_t horizon = 0;
  std::uint64_t fingerprint = 0;  // hash of the generating configuration

  // Point whose estimate is within one CI of the censored mass; fits skip it.
  bool censor_biased(std::size_t i) const {
    if (trajectories == 0 || censored == 0) return false;
    const double frac =
        static_cast<double>(censored) / static_cast<double>(trajectories);
    return surv[i] - frac <= ci_half[i];
  }
};

// Default geometric n-grid: `points` integers from n_min to horizon.
std::vector<std::uint64_t> geometric_grid(std::uint64_t n_min,
                                          std::uint64_t horizon,
                                          std::size_t points);

// Runs `trajectories` independent hitting-time simulations with stream ids
// 0..trajectories-1 and tallies survival over n_grid.  Tallies are integer
// counts merged by summation, so the result is bit-identical for a fixed
// seed regardless of the number of worker threads.  threads = 0 picks the
// hardware count.
SurvivalEstimate estimate_survival(const GrowthModel& model,
                                   const TrajectoryConfig& cfg,
                                   std::uint64_t trajectories,
                                   std::vector<std::uint64_t> n_grid,
                                   unsigned threads = 0);

enum class DriftVerdict { Negative, Positive, Inconclusive };

const char* drift_verdict_name(DriftVerdict v);

struct DriftPoint {
  double x = 0.0;
  double mean = 0.0;    // estimate of E[V(X_1) - V(x) | X_0 = x]
  double stderr_ = 0.0;
  DriftVerdict verdict = DriftVerdict::Inconclusive;
};

struct TransformedDriftPoint {
  double x = 0.0;
  double y = 0.0;   // G(x)
  double m1 = 0.0;  // estimate of E[G(X_1) - G(x)]
  double se1 = 0.0;
  double m2 = 0.0;  // estimate of E[G(X_1)^2 - G(x)^2]
  double se2 = 0.0;
};

struct DriftCheckReport {
  double alpha = 0.0;
  std::uint64_t samples = 0;
  std::vector<DriftPoint> points;

  std::vector<TransformedDriftPoint> transformed;
  double max_neg_m1 = 0.0;    // max over the grid of -m1 (0 if all m1 >= 0)
  double max_m2_over_y = 0.0; // max over the grid of m2 / G(x)
};

// Sign of the drift of x -> x^alpha at pinned states: each sample restarts
// the chain at X_0 = x and takes one step.  Verdict is Negative when
// mean + 3 stderr < 0, Positive when mean - 3 stderr > 0.  Requires
// alpha in (0, 1) and samples >= 1e5.
DriftCheckReport check_drift_power(const GrowthModel& model, double alpha,
                                   const std::vector<double>& x_grid,
                                   std::uint64_t samples,
                                   std::uint64_t seed = 1);

// One-step drift of Y = G(X) and of Y^2 at pinned states, the empirical
// side of the submartingale bounds E[dY] >= -C, E[dY^2] <= D Y.
DriftCheckReport check_drift_transformed(const GrowthModel& model,
                                         const TransformEngine& engine,
                                         const std::vector<double>& x_grid,
                                         std::uint64_t samples,
                                         std::uint64_t seed = 1);

}  // namespace growthmc
