#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "growthmc/drift.hpp"
#include "growthmc/rng.hpp"

namespace growthmc {

// Noise laws for the real-valued chain.  Both have conditional mean 0 and
// conditional variance sigma^2(x); the Gaussian one has smooth unbounded
// tails, the two-point one has bounded support for stress tests.
enum class NoiseKind { GaussianScaled, TwoPointSymmetric };

// X_{n+1} = X_n + c X_n^gamma + xi_n with Var(xi_n | X_n = x) = d x^(1+gamma).
struct PowerDriftChain {
  double c = 0.25;
  double gamma = 0.0;
  double d = 1.0;
  NoiseKind noise = NoiseKind::GaussianScaled;
};

// Nearest-neighbour walk on the integers, reflecting at 0, with
// P(x -> x+1) = (1 - delta/(2x)) / 2 for x >= 1.  delta in (-1, 0] covers
// the slow recurrent regime; delta = 0 is the symmetric-walk fixture.
struct BesselLikeWalk {
  double delta = -0.5;
};

// Critical Galton-Watson chain with immigration.  Offspring are geometric on
// {0,1,2,...} with mean 1 (so variance 2); immigrants are Poisson with the
// given mean.
struct CriticalGwi {
  double immigration_mean = 0.5;

  static constexpr double offspring_variance() { return 2.0; }
};

// Population chain where each of the x individuals reproduces with
// conditional mean 1 + c/x and variance sigma2 + o(1); 0 is absorbing.
// Per individual the litter is B + bonus where B is a three-point law on
// {0, 1, m} with exact mean 1 and variance sigma2, and the bonus has exact
// mean c/x (Bernoulli when c/x <= 1, Poisson otherwise).
//
// offspring_override is a degenerate testing hook: when set, every
// individual produces exactly that many offspring.
struct StateDepGw {
  double c = 0.3;
  double sigma2 = 1.2;
  std::optional<int> offspring_override;
};

// X_{n+1} = X_n + 1 + K eps_n sqrt(R_n) where R_n mixes X_n with a uniformly
// drawn earlier state X_{N_n}; not a Markov chain of any order.  Requires the
// full trajectory history.  Nonpositive states are clamped to the absorbing
// state 0.
struct NonMarkovR {
  double K = 4.0;
};

using GrowthModel = std::variant<PowerDriftChain, BesselLikeWalk, CriticalGwi,
                                 StateDepGw, NonMarkovR>;

// One simulated run: start at x0, watch for entry into [0, threshold], give
// up after horizon steps.  (seed, stream_id) pins the random stream; equal
// tuples always reproduce the trajectory bit for bit.
struct TrajectoryConfig {
  double x0 = 100.0;
  double threshold = 10.0;  // the A of the hitting time tau_A
  std::uint64_t horizon = 10000;
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;
};

struct HittingResult {
  bool hit = false;
  std::uint64_t time = 0;  // hitting step if hit, otherwise == horizon
};

// --- model structure -------------------------------------------------------

std::string family_name(const GrowthModel& model);
bool integer_state(const GrowthModel& model);
bool is_markov(const GrowthModel& model);
bool needs_history(const GrowthModel& model);

// Conditional mean of the increment, g(x).
double drift_mean(const GrowthModel& model, double x);
// Conditional variance of the increment, sigma^2(x).
double drift_variance(const GrowthModel& model, double x);
// Drift as a transformable spec (closed-form power drift for every family).
DriftSpec drift_spec(const GrowthModel& model);

// Up-step probability of the Bessel-like walk at integer x >= 1.
double bessel_up_probability(const BesselLikeWalk& walk, double x);

// Three-point base offspring law of StateDepGw: support {0, 1, m}.
struct StateDepBaseLaw {
  int m = 2;
  double p0 = 0.0, p1 = 1.0, pm = 0.0;
};
StateDepBaseLaw state_dep_base_law(double sigma2);

// Conditional law of R_n given the trajectory so far (history.back() = X_n).
// Exposed for the non-Markovianity checks.
double sample_nonmarkov_r(std::span<const double> history, RngStream& rng);

// --- dynamics ---------------------------------------------------------------

// One step of the model.  history must be non-empty; only NonMarkovR reads
// anything but the last entry.  Results at or below 0 collapse to 0.
double step(const GrowthModel& model, std::span<const double> history,
            RngStream& rng);

// First n >= 1 with X_n <= threshold, or censored at the horizon.  Requires
// x0 > threshold.
HittingResult simulate_hitting_time(const GrowthModel& model,
                                    const TrajectoryConfig& cfg);

// First n with X_n = 0 for the population chain (x0 counts as extinct at 0).
HittingResult extinction_time(const StateDepGw& model,
                              const TrajectoryConfig& cfg);

}  // namespace growthmc
