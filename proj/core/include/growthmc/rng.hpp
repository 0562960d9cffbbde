#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace growthmc {

// Counter-based pseudo-random stream.
//
// Every draw is a strong 64-bit hash of (key, counter), where the key is
// derived from a (seed, stream_id) pair.  Streams are therefore splittable:
// trajectory i of a run uses stream_id = i and is statistically independent
// of every other trajectory, no matter how work is scheduled across threads.
// The generator is the splitmix64 sequence, which is exactly the
// counter-based construction state = key + n * gamma, output = finalize(state).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : state_(derive_key(seed, stream_id)) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53 significant bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Fair +/-1.
  int sign() noexcept { return (next_u64() >> 63) ? 1 : -1; }

  // Standard normal via Box-Muller; the second member of each pair is cached
  // inside the stream, so draw counts stay private to the trajectory.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer on [0, bound); bound >= 1.  Unbiased by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t derive_key(std::uint64_t seed,
                                  std::uint64_t stream_id) noexcept {
    auto scramble = [](std::uint64_t z) {
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      return z ^ (z >> 31);
    };
    const std::uint64_t a = scramble(seed + 0x9E3779B97F4A7C15ULL);
    const std::uint64_t b = scramble(stream_id + 0xD1B54A32D192ED03ULL);
    return scramble(a ^ (b + 0x8CB92BA72F3D8DD7ULL + (a << 6) + (a >> 2)));
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

// Inversion sampling that enumerates states outward from the mode, always
// consuming the more probable remaining side first.  Expected cost is
// O(stddev) pmf-ratio evaluations.  ratio_down(k) = pmf(k-1)/pmf(k) and
// ratio_up(k) = pmf(k+1)/pmf(k) must be exact pmf ratios.
template <typename RatioDown, typename RatioUp>
std::int64_t inverse_from_mode(double u, std::int64_t mode, double pmf_mode,
                               std::int64_t lo, std::int64_t hi,
                               RatioDown ratio_down, RatioUp ratio_up) {
  double cum = pmf_mode;
  if (u <= cum) return mode;
  std::int64_t kl = mode - 1;
  std::int64_t kr = mode + 1;
  double pl = kl >= lo ? pmf_mode * ratio_down(mode) : 0.0;
  double pr = kr <= hi ? pmf_mode * ratio_up(mode) : 0.0;
  std::int64_t last = mode;
  while (kl >= lo || kr <= hi) {
    if (kr > hi || (kl >= lo && pl >= pr)) {
      cum += pl;
      last = kl;
      if (u <= cum) return kl;
      --kl;
      pl = kl >= lo ? pl * ratio_down(kl + 1) : 0.0;
    } else {
      cum += pr;
      last = kr;
      if (u <= cum) return kr;
      ++kr;
      pr = kr <= hi ? pr * ratio_up(kr - 1) : 0.0;
    }
    if (pl <= 0.0 && pr <= 0.0 && kl < lo && kr > hi) break;
    if (pl < 1e-300 && pr < 1e-300 && cum > 1.0 - 1e-12) break;
  }
  return last;  // u fell in the rounding deficit of the enumeration
}

inline double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace detail

// Geometric on {0,1,2,...} with success probability p: P(k) = p(1-p)^k.
inline std::int64_t sample_geometric(RngStream& rng, double p) {
  if (p >= 1.0) return 0;
  const double u = rng.uniform_pos();
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

// Poisson.  Sequential inversion for small means, mode-centred inversion for
// large ones; both sample the exact law.
inline std::int64_t sample_poisson(RngStream& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double u = rng.uniform01();
  if (mean < 30.0) {
    double p = std::exp(-mean);
    double cum = p;
    std::int64_t k = 0;
    const std::int64_t kmax = 220 + static_cast<std::int64_t>(20.0 * mean);
    while (u > cum && k < kmax) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
    }
    return k;
  }
  const auto mode = static_cast<std::int64_t>(std::floor(mean));
  const double log_pmf_mode =
      static_cast<double>(mode) * std::log(mean) - mean -
      std::lgamma(static_cast<double>(mode) + 1.0);
  return detail::inverse_from_mode(
      u, mode, std::exp(log_pmf_mode), 0,
      std::numeric_limits<std::int64_t>::max(),
      [mean](std::int64_t k) { return static_cast<double>(k) / mean; },
      [mean](std::int64_t k) { return mean / static_cast<double>(k + 1); });
}

// Binomial(n, p).
inline std::int64_t sample_binomial(RngStream& rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double np = static_cast<double>(n) * p;
  const double odds = p / (1.0 - p);
  const double u = rng.uniform01();
  if (np < 30.0) {
    double q = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cum = q;
    std::int64_t k = 0;
    while (u > cum && k < n) {
      q *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
      ++k;
      cum += q;
    }
    return k;
  }
  const auto mode = static_cast<std::int64_t>(
      std::floor((static_cast<double>(n) + 1.0) * p));
  const double log_pmf_mode = detail::log_choose(n, mode) +
                              static_cast<double>(mode) * std::log(p) +
                              static_cast<double>(n - mode) * std::log1p(-p);
  return detail::inverse_from_mode(
      u, mode, std::exp(log_pmf_mode), 0, n,
      [n, odds](std::int64_t k) {
        return static_cast<double>(k) /
               (static_cast<double>(n - k + 1) * odds);
      },
      [n, odds](std::int64_t k) {
        return odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
      });
}

// Sum of r i.i.d. Geometric(p) variables on {0,1,2,...}, i.e. the negative
// binomial NB(r, p).  Direct summation for small r, mode-centred inversion
// otherwise.
inline std::int64_t sample_negative_binomial(RngStream& rng, std::int64_t r,
                                             double p) {
  if (r <= 0) return 0;
  if (r < 32) {
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < r; ++i) total += sample_geometric(rng, p);
    return total;
  }
  const double q = 1.0 - p;
  const double rd = static_cast<double>(r);
  const auto mode = static_cast<std::int64_t>(
      std::max(0.0, std::floor((rd - 1.0) * q / p)));
  const double log_pmf_mode = detail::log_choose(mode + r - 1, mode) +
                              rd * std::log(p) +
                              static_cast<double>(mode) * std::log(q);
  const double u = rng.uniform01();
  return detail::inverse_from_mode(
      u, mode, std::exp(log_pmf_mode), 0,
      std::numeric_limits<std::int64_t>::max(),
      [rd, q](std::int64_t k) {
        return static_cast<double>(k) / (q * (rd + static_cast<double>(k) - 1.0));
      },
      [rd, q](std::int64_t k) {
        return q * (rd + static_cast<double>(k)) / static_cast<double>(k + 1);
      });
}

}  // namespace growthmc
