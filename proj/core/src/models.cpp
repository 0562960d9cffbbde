#include "growthmc/models.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "growthmc/errors.hpp"

namespace growthmc {

namespace {

void validate(const GrowthModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>) {
          if (!(m.c > 0.0)) throw ConfigError("power_drift: c must be > 0");
          if (!(m.gamma > -1.0 && m.gamma < 1.0))
            throw ConfigError("power_drift: gamma must lie in (-1, 1)");
          if (!(m.d >= 0.0)) throw ConfigError("power_drift: d must be >= 0");
        } else if constexpr (std::is_same_v<T, BesselLikeWalk>) {
          if (!(m.delta > -1.0 && m.delta <= 0.0))
            throw ConfigError("bessel: delta must lie in (-1, 0]");
        } else if constexpr (std::is_same_v<T, CriticalGwi>) {
          if (!(m.immigration_mean > 0.0))
            throw ConfigError("critical_gwi: immigration mean must be > 0");
        } else if constexpr (std::is_same_v<T, StateDepGw>) {
          if (!(m.c > 0.0)) throw ConfigError("state_dep_gw: c must be > 0");
          if (!(m.sigma2 > 0.0))
            throw ConfigError("state_dep_gw: sigma2 must be > 0");
        } else if constexpr (std::is_same_v<T, NonMarkovR>) {
          if (!(m.K > 2.0)) throw ConfigError("non_markov_r: need K > 2");
        }
      },
      model);
}

double noise_draw(NoiseKind kind, double sigma, RngStream& rng) {
  switch (kind) {
    case NoiseKind::GaussianScaled:
      return sigma * rng.gaussian();
    case NoiseKind::TwoPointSymmetric:
      return sigma * static_cast<double>(rng.sign());
  }
  return 0.0;
}

std::int64_t state_dep_offspring_total(const StateDepGw& m, std::int64_t x,
                                       RngStream& rng) {
  if (m.offspring_override) return *m.offspring_override * x;
  const StateDepBaseLaw base = state_dep_base_law(m.sigma2);
  // Multinomial split of x individuals over {0, 1, m}, then the bonus with
  // per-individual mean c/x.
  const std::int64_t n0 = sample_binomial(rng, x, base.p0);
  const std::int64_t nm =
      sample_binomial(rng, x - n0, base.pm / (1.0 - base.p0));
  const std::int64_t n1 = x - n0 - nm;
  std::int64_t total = n1 + static_cast<std::int64_t>(base.m) * nm;
  const double bonus_mean = m.c / static_cast<double>(x);
  if (bonus_mean <= 1.0) {
    total += sample_binomial(rng, x, bonus_mean);
  } else {
    for (std::int64_t k = 0; k < x; ++k)
      total += sample_poisson(rng, bonus_mean);
  }
  return total;
}

}  // namespace

std::string family_name(const GrowthModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>) return "power_drift";
        if constexpr (std::is_same_v<T, BesselLikeWalk>) return "bessel";
        if constexpr (std::is_same_v<T, CriticalGwi>) return "critical_gwi";
        if constexpr (std::is_same_v<T, StateDepGw>) return "state_dep_gw";
        if constexpr (std::is_same_v<T, NonMarkovR>) return "non_markov_r";
      },
      model);
}

bool integer_state(const GrowthModel& model) {
  return std::holds_alternative<BesselLikeWalk>(model) ||
         std::holds_alternative<CriticalGwi>(model) ||
         std::holds_alternative<StateDepGw>(model);
}

bool is_markov(const GrowthModel& model) {
  return !std::holds_alternative<NonMarkovR>(model);
}

bool needs_history(const GrowthModel& model) {
  return std::holds_alternative<NonMarkovR>(model);
}

double drift_mean(const GrowthModel& model, double x) {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>)
          return m.c * std::pow(x, m.gamma);
        if constexpr (std::is_same_v<T, BesselLikeWalk>)
          return -m.delta / (2.0 * x);
        if constexpr (std::is_same_v<T, CriticalGwi>)
          return m.immigration_mean;
        if constexpr (std::is_same_v<T, StateDepGw>) return m.c;
        if constexpr (std::is_same_v<T, NonMarkovR>) return 1.0;
      },
      model);
}

double drift_variance(const GrowthModel& model, double x) {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>)
          return m.d * std::pow(x, 1.0 + m.gamma);
        if constexpr (std::is_same_v<T, BesselLikeWalk>) {
          const double mu = m.delta / (2.0 * x);
          return 1.0 - mu * mu;
        }
        if constexpr (std::is_same_v<T, CriticalGwi>)
          return CriticalGwi::offspring_variance() * x + m.immigration_mean;
        if constexpr (std::is_same_v<T, StateDepGw>) {
          const double q = m.c / x;
          if (q <= 1.0) return m.sigma2 * x + m.c * (1.0 - q);
          return m.sigma2 * x + m.c;  // Poisson bonus regime
        }
        if constexpr (std::is_same_v<T, NonMarkovR>) return m.K * m.K * x / 2.0;
      },
      model);
}

DriftSpec drift_spec(const GrowthModel& model) {
  return std::visit(
      [](const auto& m) -> DriftSpec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>)
          return DriftSpec::power(m.c, m.gamma);
        else if constexpr (std::is_same_v<T, BesselLikeWalk>)
          return DriftSpec::power(-m.delta / 2.0, -1.0);
        else if constexpr (std::is_same_v<T, CriticalGwi>)
          return DriftSpec::power(m.immigration_mean, 0.0);
        else if constexpr (std::is_same_v<T, StateDepGw>)
          return DriftSpec::power(m.c, 0.0);
        else
          return DriftSpec::power(1.0, 0.0);
      },
      model);
}

double bessel_up_probability(const BesselLikeWalk& walk, double x) {
  if (x < 1.0) return 1.0;  // reflection at 0
  return 0.5 * (1.0 - walk.delta / (2.0 * x));
}

StateDepBaseLaw state_dep_base_law(double sigma2) {
  if (!(sigma2 > 0.0))
    throw ConfigError("state_dep_gw: sigma2 must be > 0");
  // Smallest m with a valid {0, 1, m} law of mean 1 and variance sigma2:
  //   pm = sigma2 / (m(m-1)),  p1 = 1 - sigma2/(m-1),  p0 = sigma2 / m.
  int m = 2;
  while (sigma2 > static_cast<double>(m - 1)) ++m;
  StateDepBaseLaw law;
  law.m = m;
  const double md = static_cast<double>(m);
  law.pm = sigma2 / (md * (md - 1.0));
  law.p1 = 1.0 - sigma2 / (md - 1.0);
  law.p0 = sigma2 / md;
  return law;
}

double sample_nonmarkov_r(std::span<const double> history, RngStream& rng) {
  const std::size_t n = history.size() - 1;  // current time index
  const double xn = history[n];
  const std::uint64_t pick = rng.uniform_below(n + 1);
  const double xk = history[pick];
  const bool u = rng.bernoulli(0.5);
  const double denom = xn + xk;
  if (denom <= 0.0) return 0.0;
  return u ? xn * xn / denom : xn * xk / denom;
}

double step(const GrowthModel& model, std::span<const double> history,
            RngStream& rng) {
  if (history.empty()) throw std::invalid_argument("step: empty history");
  const double x = history.back();
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>) {
          if (x <= 0.0) return 0.0;
          // pow is the hot spot of the trajectory loop; gamma = 0 is the
          // most simulated family
          double xg;
          if (m.gamma == 0.0)
            xg = 1.0;
          else if (m.gamma == 0.5)
            xg = std::sqrt(x);
          else
            xg = std::pow(x, m.gamma);
          const double sigma = std::sqrt(m.d * x * xg);
          const double next = x + m.c * xg + noise_draw(m.noise, sigma, rng);
          return next > 0.0 ? next : 0.0;
        } else if constexpr (std::is_same_v<T, BesselLikeWalk>) {
          if (x < 1.0) return 1.0;  // reflect at 0
          const double up = bessel_up_probability(m, x);
          return rng.bernoulli(up) ? x + 1.0 : x - 1.0;
        } else if constexpr (std::is_same_v<T, CriticalGwi>) {
          const auto xi = static_cast<std::int64_t>(x);
          const std::int64_t progeny =
              sample_negative_binomial(rng, xi, 0.5);  // x-fold geometric sum
          const std::int64_t immigrants =
              sample_poisson(rng, m.immigration_mean);
          return static_cast<double>(progeny + immigrants);
        } else if constexpr (std::is_same_v<T, StateDepGw>) {
          const auto xi = static_cast<std::int64_t>(x);
          if (xi <= 0) return 0.0;  // absorbing
          return static_cast<double>(state_dep_offspring_total(m, xi, rng));
        } else {
          if (x <= 0.0) return 0.0;  // absorbing after a nonpositive visit
          const double r = sample_nonmarkov_r(history, rng);
          const double eps = static_cast<double>(rng.sign());
          const double next = x + 1.0 + m.K * eps * std::sqrt(r);
          return next > 0.0 ? next : 0.0;
        }
      },
      model);
}

HittingResult simulate_hitting_time(const GrowthModel& model,
                                    const TrajectoryConfig& cfg) {
  validate(model);
  if (!(cfg.x0 > cfg.threshold))
    throw ConfigError("simulate_hitting_time: requires x0 > threshold");
  if (cfg.horizon < 1)
    throw ConfigError("simulate_hitting_time: horizon must be >= 1");
  // The history-dependent model keeps the full trajectory in memory.
  if (needs_history(model) && cfg.horizon > 1000000)
    throw ConfigError("simulate_hitting_time: non_markov_r horizons are "
                      "capped at 1e6 (full history is stored)");
  RngStream rng(cfg.seed, cfg.stream_id);
  const bool keep_history = needs_history(model);
  std::vector<double> history;
  history.reserve(keep_history ? 256 : 1);
  history.push_back(cfg.x0);
  double x = cfg.x0;
  for (std::uint64_t n = 1; n <= cfg.horizon; ++n) {
    x = step(model, history, rng);
    if (keep_history)
      history.push_back(x);
    else
      history.back() = x;
    if (x <= cfg.threshold) return {true, n};
  }
  return {false, cfg.horizon};
}

HittingResult extinction_time(const StateDepGw& model,
                              const TrajectoryConfig& cfg) {
  if (cfg.x0 == 0.0) return {true, 0};
  TrajectoryConfig run = cfg;
  run.threshold = 0.0;
  return simulate_hitting_time(GrowthModel{model}, run);
}

}  // namespace growthmc
