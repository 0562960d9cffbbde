#include "growthmc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "growthmc/errors.hpp"

namespace growthmc {

std::vector<std::uint64_t> geometric_grid(std::uint64_t n_min,
                                          std::uint64_t horizon,
                                          std::size_t points) {
  if (n_min < 1 || horizon < n_min)
    throw ConfigError("geometric_grid: need 1 <= n_min <= horizon");
  std::vector<std::uint64_t> grid;
  grid.reserve(points);
  const double lo = std::log(static_cast<double>(n_min));
  const double hi = std::log(static_cast<double>(horizon));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 1.0
                                 : static_cast<double>(i) /
                                       static_cast<double>(points - 1);
    const auto n = static_cast<std::uint64_t>(
        std::llround(std::exp(lo + t * (hi - lo))));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

SurvivalEstimate estimate_survival(const GrowthModel& model,
                                   const TrajectoryConfig& cfg,
                                   std::uint64_t trajectories,
                                   std::vector<std::uint64_t> n_grid,
                                   unsigned threads) {
  if (trajectories < 1)
    throw ConfigError("estimate_survival: need at least one trajectory");
  if (n_grid.empty()) throw ConfigError("estimate_survival: empty n-grid");
  std::sort(n_grid.begin(), n_grid.end());
  n_grid.erase(std::unique(n_grid.begin(), n_grid.end()), n_grid.end());
  if (n_grid.front() < 1 || n_grid.back() > cfg.horizon)
    throw ConfigError("estimate_survival: n-grid must lie in [1, horizon]");

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, trajectories));

  const std::size_t g = n_grid.size();
  // Per-trajectory outcome tau lands in bucket #points-outlived, so the
  // survival counts are suffix sums of an integer histogram.  Integer merges
  // keep the result independent of the thread partition.
  std::vector<std::vector<std::uint64_t>> hist(
      threads, std::vector<std::uint64_t>(g + 1, 0));
  std::vector<std::uint64_t> censored_per_thread(threads, 0);

  auto worker = [&](unsigned t, std::uint64_t begin, std::uint64_t end) {
    auto& h = hist[t];
    std::uint64_t censored = 0;
    for (std::uint64_t id = begin; id < end; ++id) {
      TrajectoryConfig run = cfg;
      run.stream_id = id;
      const HittingResult res = simulate_hitting_time(model, run);
      const std::uint64_t tau =
          res.hit ? res.time : cfg.horizon + 1;  // censored outlives the grid
      if (!res.hit) ++censored;
      const std::size_t outlived = static_cast<std::size_t>(
          std::lower_bound(n_grid.begin(), n_grid.end(), tau) -
          n_grid.begin());
      ++h[outlived];
    }
    censored_per_thread[t] = censored;
  };

  if (threads == 1) {
    worker(0, 0, trajectories);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (trajectories + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
      const std::uint64_t end = std::min(trajectories, begin + chunk);
      pool.emplace_back(worker, t, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::uint64_t> merged(g + 1, 0);
  std::uint64_t censored = 0;
  for (unsigned t = 0; t < threads; ++t) {
    for (std::size_t i = 0; i <= g; ++i) merged[i] += hist[t][i];
    censored += censored_per_thread[t];
  }

  SurvivalEstimate est;
  est.n_grid = std::move(n_grid);
  est.trajectories = trajectories;
  est.censored = censored;
  est.horizon = cfg.horizon;
  est.surv.resize(g);
  est.ci_half.resize(g);
  // Count of tau > n_grid[i] is the suffix sum of the outlived histogram.
  std::uint64_t suffix = 0;
  for (std::size_t i = g; i-- > 0;) {
    suffix += merged[i + 1];
    const double p =
        static_cast<double>(suffix) / static_cast<double>(trajectories);
    est.surv[i] = p;
    est.ci_half[i] =
        1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trajectories));
  }
  return est;
}

const char* drift_verdict_name(DriftVerdict v) {
  switch (v) {
    case DriftVerdict::Negative:
      return "NEGATIVE";
    case DriftVerdict::Positive:
      return "POSITIVE";
    case DriftVerdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

DriftVerdict verdict_from(double mean, double se) {
  if (mean + 3.0 * se < 0.0) return DriftVerdict::Negative;
  if (mean - 3.0 * se > 0.0) return DriftVerdict::Positive;
  return DriftVerdict::Inconclusive;
}

struct MeanVar {
  double mean = 0.0;
  double se = 0.0;
};

// Welford accumulation of one-step functionals restarted at X_0 = x.
template <typename Fn>
MeanVar one_step_stat(const GrowthModel& model, double x,
                      std::uint64_t samples, std::uint64_t seed,
                      std::uint64_t stream_base, Fn&& fn) {
  double mean = 0.0, m2 = 0.0;
  const double history[1] = {x};
  for (std::uint64_t s = 0; s < samples; ++s) {
    RngStream rng(seed, stream_base + s);
    const double x1 = step(model, std::span<const double>(history, 1), rng);
    const double v = fn(x1);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  MeanVar out;
  out.mean = mean;
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  out.se = std::sqrt(var / static_cast<double>(samples));
  return out;
}

void validate_drift_args(const std::vector<double>& x_grid,
                         std::uint64_t samples) {
  if (x_grid.empty()) throw ConfigError("drift check: empty x-grid");
  if (samples < 100000)
    throw ConfigError("drift check: needs at least 1e5 samples per state");
}

}  // namespace

DriftCheckReport check_drift_power(const GrowthModel& model, double alpha,
                                   const std::vector<double>& x_grid,
                                   std::uint64_t samples, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("check_drift_power: alpha must lie in (0, 1)");
  validate_drift_args(x_grid, samples);
  DriftCheckReport report;
  report.alpha = alpha;
  report.samples = samples;
  std::uint64_t stream_base = 0;
  for (const double x : x_grid) {
    const double vx = std::pow(x, alpha);
    const MeanVar s =
        one_step_stat(model, x, samples, seed, stream_base,
                      [&](double x1) { return std::pow(x1, alpha) - vx; });
    stream_base += samples;
    report.points.push_back({x, s.mean, s.se, verdict_from(s.mean, s.se)});
  }
  return report;
}

DriftCheckReport check_drift_transformed(const GrowthModel& model,
                                         const TransformEngine& engine,
                                         const std::vector<double>& x_grid,
                                         std::uint64_t samples,
                                         std::uint64_t seed) {
  validate_drift_args(x_grid, samples);
  DriftCheckReport report;
  report.samples = samples;
  std::uint64_t stream_base = 0;
  for (const double x : x_grid) {
    const double y = engine.eval_G(x);
    // One pass accumulating both dY and dY^2 on the same draws.
    double mean1 = 0.0, m21 = 0.0, mean2 = 0.0, m22 = 0.0;
    const double history[1] = {x};
    for (std::uint64_t s = 0; s < samples; ++s) {
      RngStream rng(seed, stream_base + s);
      const double x1 = step(model, std::span<const double>(history, 1), rng);
      const double y1 = engine.eval_G(std::max(x1, 1.0));
      const double v1 = y1 - y;
      const double v2 = y1 * y1 - y * y;
      double delta = v1 - mean1;
      mean1 += delta / static_cast<double>(s + 1);
      m21 += delta * (v1 - mean1);
      delta = v2 - mean2;
      mean2 += delta / static_cast<double>(s + 1);
      m22 += delta * (v2 - mean2);
    }
    stream_base += samples;
    TransformedDriftPoint point;
    point.x = x;
    point.y = y;
    point.m1 = mean1;
    point.se1 = std::sqrt(m21 / static_cast<double>(samples - 1) /
                          static_cast<double>(samples));
    point.m2 = mean2;
    point.se2 = std::sqrt(m22 / static_cast<double>(samples - 1) /
                          static_cast<double>(samples));
    report.transformed.push_back(point);
    report.max_neg_m1 = std::max(report.max_neg_m1, -point.m1);
    if (y > 0.0)
      report.max_m2_over_y = std::max(report.max_m2_over_y, point.m2 / y);
  }
  return report;
}

}  // namespace growthmc
