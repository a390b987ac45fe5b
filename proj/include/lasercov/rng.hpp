#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lasercov {

namespace detail {

// SplitMix64 output finalizer. Used both as the per-step mixer and as the
// hash that turns (seed, stream) pairs into well-separated initial states.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Splittable random stream: stream k of a given seed is statistically
/// independent of stream j != k, so Monte Carlo iterations can each own the
/// stream indexed by their iteration number and be farmed out to any number
/// of workers without changing the results.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    // Hash the pair; a plain additive offset would alias stream k draw j
    // with stream k+1 draw j-1.
    state_ = detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
             detail::mix64(stream * 0xda942042e4dd58b5ULL + 0x8bb84b93962eacc9ULL);
  }

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform draw in the half-open interval (0, 1]. Never returns 0, so the
  /// result is always safe to pass through std::log.
  double uniform01() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms per call
  /// (no cached spare), which keeps the draw count per iteration fixed.
  double normal() noexcept {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Exact Poisson draw for any mean >= 0. Large means are split into
  /// independent chunks (Poisson additivity) so the multiplicative method
  /// never underflows.
  std::uint64_t poisson(double mean) {
    std::uint64_t n = 0;
    while (mean > 16.0) {
      n += poisson_small(16.0);
      mean -= 16.0;
    }
    return n + poisson_small(mean);
  }

 private:
  std::uint64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t state_;
};

}  // namespace lasercov
