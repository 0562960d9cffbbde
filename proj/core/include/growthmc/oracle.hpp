#pragma once

#include <cstdint>
#include <vector>

#include "growthmc/models.hpp"

namespace growthmc {

// What to do with one-step mass that would land above the state cap.
//   TrackOverflow - keep it out of the row and account for it explicitly
//   ReflectToCap  - fold it into the cap state, making the row stochastic
//                   (used by finite fixtures where an exactly conservative
//                   chain is wanted; overflow is then identically zero)
enum class BoundaryPolicy { TrackOverflow, ReflectToCap };

struct SparseRow {
  std::vector<std::pair<std::int32_t, double>> entries;  // sorted by state
  double overflow = 0.0;  // mass beyond the cap (TrackOverflow only)
};

// Exact transition kernel of a countable-state model truncated to {0..cap}.
// Row invariant: sum of entries + overflow = 1 within 1e-12.
struct TruncatedKernel {
  std::int32_t cap = 0;
  std::vector<SparseRow> rows;      // rows[x] for x in 0..cap
  std::int32_t absorb_max = -1;     // states <= absorb_max form [0, A]; -1: none
  double max_overflow = 0.0;
  std::vector<std::int32_t> flagged_rows;  // rows with overflow > 1e-9

  std::size_t entry_count() const;
};

// Exact rows for the countable families (BesselLikeWalk, CriticalGwi,
// StateDepGw).  absorb_max < 0 builds the free-running chain (Bessel
// reflects at 0, the GWI chain regenerates through immigration); the
// population chain keeps 0 absorbing regardless.  Throws CapError when a
// bulk row (x <= cap/2) loses more than half its mass past the cap.
TruncatedKernel build_kernel(const GrowthModel& model, std::int32_t cap,
                             std::int32_t absorb_max = -1,
                             BoundaryPolicy boundary =
                                 BoundaryPolicy::TrackOverflow);

// Finite positive-recurrent fixture mirroring a power-drift chain on the
// integers: from x the chain jumps -h, 0, +h with h ~ sqrt(d x^(1+gamma))
// and exact conditional mean c x^gamma and variance d x^(1+gamma); 0
// reflects to 1.  With ReflectToCap the kernel is exactly stochastic.
TruncatedKernel build_discrete_power_kernel(double c, double gamma, double d,
                                            std::int32_t cap,
                                            BoundaryPolicy boundary =
                                                BoundaryPolicy::ReflectToCap);

// Birth-death fixture: up with probability p, down with 1-p, reflecting at 0
// (invariant measure is geometric by detailed balance).
TruncatedKernel build_birth_death_kernel(double p_up, std::int32_t cap);

struct SurvivalCurve {
  std::vector<double> values;   // values[n] = P(tau > n), n = 0..n_max
  double overflow_bound = 0.0;  // accumulated truncation loss
};

// P(tau > n) for the absorbing set [0, absorb_max], computed by iterating
// the kernel restricted to the transient states.  Mass escaping past the cap
// is dropped and accumulated into overflow_bound (the computed curve is a
// lower bound; the true value is within +overflow_bound).  Throws CapError
// if the bound exceeds accuracy_goal.
SurvivalCurve exact_survival(const TruncatedKernel& kernel, std::int32_t x0,
                             std::uint64_t n_max,
                             double accuracy_goal = 1e-6);

struct InvariantResult {
  std::vector<double> pi;       // probability vector over 0..cap
  double residual = 0.0;        // || pi P - pi ||_1 at exit
  double overflow_bound = 0.0;  // sum_x pi(x) * overflow(x)
  std::uint64_t iterations = 0;
  bool converged = false;
};

// Power iteration until || pi P - pi ||_1 <= tol.  Requires a kernel without
// an absorbing set.  Flagged (converged = false) after max_iterations or when
// the per-step overflow makes tol unattainable.
InvariantResult invariant_measure(const TruncatedKernel& kernel, double tol,
                                  std::uint64_t max_iterations = 2000000);

struct TvDecayPoint {
  std::uint64_t n = 0;
  double tv = 0.0;        // || P^n(x0, .) - pi ||_TV
  double weight = 0.0;    // optional multiplier supplied by the caller
  double weighted = 0.0;  // weight * tv
};

struct TvDecayResult {
  std::vector<TvDecayPoint> points;
  double overflow_bound = 0.0;  // TV error bound from truncation loss
};

// Exact row evolution delta_{x0} P^n with TV distance to pi at each grid
// point.  weights, when non-empty, must match n_grid and fills the weighted
// column (typically ell'_alpha(n)).
TvDecayResult tv_decay(const TruncatedKernel& kernel,
                       const std::vector<double>& pi, std::int32_t x0,
                       const std::vector<std::uint64_t>& n_grid,
                       const std::vector<double>& weights = {});

}  // namespace growthmc
