#include "growthmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "growthmc/errors.hpp"

namespace growthmc {

namespace {

constexpr double kEntryCutoff = 1e-14;  // sub-cutoff pmf mass joins the deficit

// Dense pmf over {0, 1, 2, ...} used while assembling rows.
using Pmf = std::vector<double>;

Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_len) {
  Pmf out(std::min(a.size() + b.size() - 1, max_len), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    const std::size_t jmax = std::min(b.size(), out.size() - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Poisson pmf truncated where the tail drops below 1e-17.
Pmf poisson_pmf(double mean) {
  Pmf pmf;
  double p = std::exp(-mean);
  pmf.push_back(p);
  for (std::size_t k = 1; k < 4096; ++k) {
    p *= mean / static_cast<double>(k);
    pmf.push_back(p);
    if (p < 1e-17 && static_cast<double>(k) > mean) break;
  }
  return pmf;
}

// Binomial(n, q) pmf with the same tail truncation.
Pmf binomial_pmf(std::int64_t n, double q) {
  Pmf pmf;
  double p = std::exp(static_cast<double>(n) * std::log1p(-q));
  pmf.push_back(p);
  const double odds = q / (1.0 - q);
  for (std::int64_t k = 0; k < n; ++k) {
    p *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
    pmf.push_back(p);
    if (p < 1e-17 &&
        static_cast<double>(k + 1) > static_cast<double>(n) * q)
      break;
  }
  return pmf;
}

// Negative binomial NB(r, 1/2) pmf (the r-fold convolution of the mean-one
// geometric offspring law), restricted to {0..max_state}.  Computed outward
// from the mode so that large r cannot underflow the recurrence start.
Pmf negative_binomial_half_pmf(std::int64_t r, std::size_t max_len) {
  const double rd = static_cast<double>(r);
  const auto mode =
      static_cast<std::int64_t>(std::min<double>(std::max(0.0, rd - 1.0),
                                                 static_cast<double>(max_len - 1)));
  const double log_pmf_mode = detail::log_choose(mode + r - 1, mode) -
                              (static_cast<double>(mode) + rd) * std::log(2.0);
  Pmf pmf(max_len, 0.0);
  pmf[mode] = std::exp(log_pmf_mode);
  // pmf(k-1)/pmf(k) = 2k / (k + r - 1); pmf(k+1)/pmf(k) = (k + r) / (2(k+1)).
  double p = pmf[mode];
  for (std::int64_t k = mode; k > 0; --k) {
    p *= 2.0 * static_cast<double>(k) / (rd + static_cast<double>(k) - 1.0);
    pmf[k - 1] = p;
    if (p < 1e-18) break;
  }
  p = pmf[mode];
  for (std::size_t k = static_cast<std::size_t>(mode) + 1; k < max_len; ++k) {
    p *= 0.5 * (rd + static_cast<double>(k) - 1.0) / static_cast<double>(k);
    pmf[k] = p;
    if (p < 1e-18) break;
  }
  return pmf;
}

SparseRow pack_row(const Pmf& pmf, std::int32_t cap, BoundaryPolicy boundary) {
  SparseRow row;
  double kept = 0.0;
  for (std::size_t s = 0; s < pmf.size() && s <= static_cast<std::size_t>(cap);
       ++s) {
    if (pmf[s] >= kEntryCutoff) {
      row.entries.emplace_back(static_cast<std::int32_t>(s), pmf[s]);
      kept += pmf[s];
    }
  }
  const double deficit = std::max(0.0, 1.0 - kept);
  if (boundary == BoundaryPolicy::ReflectToCap) {
    if (!row.entries.empty() && row.entries.back().first == cap)
      row.entries.back().second += deficit;
    else if (deficit > 0.0)
      row.entries.emplace_back(cap, deficit);
    row.overflow = 0.0;
  } else {
    row.overflow = deficit;
  }
  return row;
}

SparseRow identity_row(std::int32_t x) {
  SparseRow row;
  row.entries.emplace_back(x, 1.0);
  return row;
}

void finalize(TruncatedKernel& kernel) {
  kernel.max_overflow = 0.0;
  kernel.flagged_rows.clear();
  for (std::size_t x = 0; x < kernel.rows.size(); ++x) {
    const double ov = kernel.rows[x].overflow;
    kernel.max_overflow = std::max(kernel.max_overflow, ov);
    if (ov > 1e-9) kernel.flagged_rows.push_back(static_cast<std::int32_t>(x));
  }
  // Bulk rows losing most of their mass mean the cap is simply too small.
  for (std::int32_t x = 0; x <= kernel.cap / 2; ++x) {
    if (kernel.rows[x].overflow > 0.5)
      throw CapError("build_kernel: row " + std::to_string(x) +
                     " overflows past the cap; increase cap");
  }
}

}  // namespace

std::size_t TruncatedKernel::entry_count() const {
  std::size_t n = 0;
  for (const auto& row : rows) n += row.entries.size();
  return n;
}

TruncatedKernel build_kernel(const GrowthModel& model, std::int32_t cap,
                             std::int32_t absorb_max,
                             BoundaryPolicy boundary) {
  if (cap < 2) throw ConfigError("build_kernel: cap must be >= 2");
  if (!integer_state(model))
    throw ConfigError("build_kernel: " + family_name(model) +
                      " has no countable-state kernel");
  TruncatedKernel kernel;
  kernel.cap = cap;
  kernel.absorb_max = absorb_max;
  kernel.rows.resize(static_cast<std::size_t>(cap) + 1);

  auto absorbing = [&](std::int32_t x) { return x <= absorb_max; };

  if (const auto* walk = std::get_if<BesselLikeWalk>(&model)) {
    for (std::int32_t x = 0; x <= cap; ++x) {
      if (absorbing(x)) {
        kernel.rows[x] = identity_row(x);
        continue;
      }
      SparseRow row;
      if (x == 0) {
        row.entries.emplace_back(1, 1.0);
      } else {
        const double up = bessel_up_probability(*walk, x);
        row.entries.emplace_back(x - 1, 1.0 - up);
        if (x + 1 <= cap) {
          row.entries.emplace_back(x + 1, up);
        } else if (boundary == BoundaryPolicy::ReflectToCap) {
          row.entries.emplace_back(cap, up);
        } else {
          row.overflow = up;
        }
      }
      kernel.rows[x] = row;
    }
  } else if (const auto* gwi = std::get_if<CriticalGwi>(&model)) {
    const Pmf immigration = poisson_pmf(gwi->immigration_mean);
    const std::size_t max_len = static_cast<std::size_t>(cap) + 1;
    for (std::int32_t x = 0; x <= cap; ++x) {
      if (absorbing(x)) {
        kernel.rows[x] = identity_row(x);
        continue;
      }
      Pmf pmf;
      if (x == 0) {
        pmf = immigration;  // empty progeny sum: the immigration law itself
      } else {
        pmf = convolve(negative_binomial_half_pmf(x, max_len), immigration,
                       max_len);
      }
      kernel.rows[x] = pack_row(pmf, cap, boundary);
    }
  } else {
    const auto& gw = std::get<StateDepGw>(model);
    const StateDepBaseLaw base = state_dep_base_law(gw.sigma2);
    Pmf base_pmf(static_cast<std::size_t>(base.m) + 1, 0.0);
    base_pmf[0] = base.p0;
    base_pmf[1] = base.p1;
    base_pmf[base.m] += base.pm;
    const std::size_t max_len = static_cast<std::size_t>(cap) + 1;
    kernel.rows[0] = identity_row(0);  // extinction is absorbing
    Pmf progeny{1.0};                  // base law convolved x times, shared
    for (std::int32_t x = 1; x <= cap; ++x) {
      progeny = convolve(progeny, base_pmf, max_len);
      if (absorbing(x)) {
        kernel.rows[x] = identity_row(x);
        continue;
      }
      const double bonus_mean = gw.c / static_cast<double>(x);
      const Pmf bonus = bonus_mean <= 1.0
                            ? binomial_pmf(x, bonus_mean)
                            : poisson_pmf(gw.c);  // c/x per head, x heads
      kernel.rows[x] = pack_row(convolve(progeny, bonus, max_len), cap,
                                boundary);
    }
  }

  finalize(kernel);
  return kernel;
}

TruncatedKernel build_discrete_power_kernel(double c, double gamma, double d,
                                            std::int32_t cap,
                                            BoundaryPolicy boundary) {
  if (cap < 2) throw ConfigError("discrete_power_kernel: cap must be >= 2");
  if (!(c > 0.0 && d > 0.0))
    throw ConfigError("discrete_power_kernel: c and d must be > 0");
  TruncatedKernel kernel;
  kernel.cap = cap;
  kernel.absorb_max = -1;
  kernel.rows.resize(static_cast<std::size_t>(cap) + 1);
  kernel.rows[0] = identity_row(0);
  kernel.rows[0].entries[0] = {1, 1.0};  // reflect 0 -> 1
  for (std::int32_t x = 1; x <= cap; ++x) {
    const double xd = static_cast<double>(x);
    const double mean = c * std::pow(xd, gamma);
    const double var = d * std::pow(xd, 1.0 + gamma);
    const double second = var + mean * mean;
    const auto h = static_cast<std::int32_t>(std::ceil(std::sqrt(second)));
    const double hd = static_cast<double>(h);
    double p_up = 0.5 * (second / (hd * hd) + mean / hd);
    double p_dn = 0.5 * (second / (hd * hd) - mean / hd);
    p_up = std::clamp(p_up, 0.0, 1.0);
    p_dn = std::clamp(p_dn, 0.0, 1.0 - p_up);
    const double p_stay = 1.0 - p_up - p_dn;
    SparseRow row;
    const std::int32_t down = std::max(0, x - h);
    const std::int32_t up = x + h;
    row.entries.emplace_back(down, p_dn);
    if (p_stay > 0.0) row.entries.emplace_back(x, p_stay);
    if (up <= cap) {
      row.entries.emplace_back(up, p_up);
    } else if (boundary == BoundaryPolicy::ReflectToCap) {
      if (!row.entries.empty() && row.entries.back().first == cap)
        row.entries.back().second += p_up;
      else
        row.entries.emplace_back(cap, p_up);
    } else {
      row.overflow = p_up;
    }
    std::sort(row.entries.begin(), row.entries.end());
    kernel.rows[x] = row;
  }
  finalize(kernel);
  return kernel;
}

TruncatedKernel build_birth_death_kernel(double p_up, std::int32_t cap) {
  if (!(p_up > 0.0 && p_up < 1.0))
    throw ConfigError("birth_death_kernel: p_up must lie in (0, 1)");
  TruncatedKernel kernel;
  kernel.cap = cap;
  kernel.absorb_max = -1;
  kernel.rows.resize(static_cast<std::size_t>(cap) + 1);
  {
    SparseRow row;
    row.entries.emplace_back(0, 1.0 - p_up);
    row.entries.emplace_back(1, p_up);
    kernel.rows[0] = row;
  }
  for (std::int32_t x = 1; x <= cap; ++x) {
    SparseRow row;
    row.entries.emplace_back(x - 1, 1.0 - p_up);
    if (x + 1 <= cap)
      row.entries.emplace_back(x + 1, p_up);
    else
      row.entries.emplace_back(cap, p_up);  // reflect
    kernel.rows[x] = row;
  }
  finalize(kernel);
  return kernel;
}

namespace {

// Flat CSR view of the kernel for the iteration loops.
struct FlatKernel {
  std::vector<std::size_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;
  std::vector<double> overflow;

  explicit FlatKernel(const TruncatedKernel& k) {
    row_ptr.reserve(k.rows.size() + 1);
    row_ptr.push_back(0);
    for (const auto& row : k.rows) {
      for (const auto& [c, v] : row.entries) {
        col.push_back(c);
        val.push_back(v);
      }
      overflow.push_back(row.overflow);
      row_ptr.push_back(col.size());
    }
  }
};

}  // namespace

SurvivalCurve exact_survival(const TruncatedKernel& kernel, std::int32_t x0,
                             std::uint64_t n_max, double accuracy_goal) {
  if (kernel.absorb_max < 0)
    throw ConfigError("exact_survival: kernel has no absorbing set");
  if (x0 <= kernel.absorb_max || x0 > kernel.cap)
    throw ConfigError("exact_survival: x0 must lie in (absorb_max, cap]");
  const FlatKernel flat(kernel);
  const std::size_t states = kernel.rows.size();
  std::vector<double> u(states, 0.0), next(states, 0.0);
  u[static_cast<std::size_t>(x0)] = 1.0;
  SurvivalCurve curve;
  curve.values.reserve(n_max + 1);
  curve.values.push_back(1.0);
  const auto absorb_max = static_cast<std::size_t>(kernel.absorb_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = absorb_max + 1; x < states; ++x) {
      const double mass = u[x];
      if (mass == 0.0) continue;
      curve.overflow_bound += mass * flat.overflow[x];
      for (std::size_t i = flat.row_ptr[x]; i < flat.row_ptr[x + 1]; ++i) {
        const auto y = static_cast<std::size_t>(flat.col[i]);
        if (y > absorb_max) next[y] += mass * flat.val[i];
      }
    }
    std::swap(u, next);
    double alive = 0.0;
    for (std::size_t x = absorb_max + 1; x < states; ++x) alive += u[x];
    curve.values.push_back(alive);
    if (curve.overflow_bound > accuracy_goal)
      throw CapError("exact_survival: truncation loss " +
                     std::to_string(curve.overflow_bound) +
                     " exceeds the accuracy goal; increase cap");
  }
  return curve;
}

InvariantResult invariant_measure(const TruncatedKernel& kernel, double tol,
                                  std::uint64_t max_iterations) {
  if (kernel.absorb_max >= 0)
    throw ConfigError("invariant_measure: kernel must have no absorbing set");
  const FlatKernel flat(kernel);
  const std::size_t states = kernel.rows.size();
  InvariantResult result;
  std::vector<double> u(states, 1.0 / static_cast<double>(states));
  std::vector<double> next(states, 0.0);
  for (std::uint64_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < states; ++x) {
      const double mass = u[x];
      if (mass == 0.0) continue;
      for (std::size_t i = flat.row_ptr[x]; i < flat.row_ptr[x + 1]; ++i)
        next[static_cast<std::size_t>(flat.col[i])] += mass * flat.val[i];
    }
    double total = std::accumulate(next.begin(), next.end(), 0.0);
    if (total > 0.0)
      for (double& v : next) v /= total;
    double residual = 0.0;
    for (std::size_t x = 0; x < states; ++x)
      residual += std::abs(next[x] - u[x]);
    std::swap(u, next);
    result.iterations = it + 1;
    result.residual = residual;
    if (residual <= tol) {
      result.converged = true;
      break;
    }
  }
  result.overflow_bound = 0.0;
  for (std::size_t x = 0; x < states; ++x)
    result.overflow_bound += u[x] * flat.overflow[x];
  if (result.overflow_bound > tol) result.converged = false;
  result.pi = std::move(u);
  return result;
}

TvDecayResult tv_decay(const TruncatedKernel& kernel,
                       const std::vector<double>& pi, std::int32_t x0,
                       const std::vector<std::uint64_t>& n_grid,
                       const std::vector<double>& weights) {
  if (pi.size() != kernel.rows.size())
    throw ConfigError("tv_decay: pi does not match the kernel");
  if (x0 < 0 || x0 > kernel.cap)
    throw ConfigError("tv_decay: x0 out of range");
  if (!weights.empty() && weights.size() != n_grid.size())
    throw ConfigError("tv_decay: weights must match n_grid");
  const FlatKernel flat(kernel);
  const std::size_t states = kernel.rows.size();
  std::vector<double> u(states, 0.0), next(states, 0.0);
  u[static_cast<std::size_t>(x0)] = 1.0;
  TvDecayResult result;
  double leaked = 0.0;
  std::uint64_t n = 0;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    for (; n < n_grid[gi]; ++n) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t x = 0; x < states; ++x) {
        const double mass = u[x];
        if (mass == 0.0) continue;
        leaked += mass * flat.overflow[x];
        for (std::size_t i = flat.row_ptr[x]; i < flat.row_ptr[x + 1]; ++i)
          next[static_cast<std::size_t>(flat.col[i])] += mass * flat.val[i];
      }
      std::swap(u, next);
    }
    TvDecayPoint point;
    point.n = n_grid[gi];
    double l1 = 0.0;
    for (std::size_t x = 0; x < states; ++x) l1 += std::abs(u[x] - pi[x]);
    point.tv = 0.5 * l1;
    point.weight = weights.empty() ? 1.0 : weights[gi];
    point.weighted = point.weight * point.tv;
    result.points.push_back(point);
  }
  result.overflow_bound = leaked;
  return result;
}

}  // namespace growthmc
