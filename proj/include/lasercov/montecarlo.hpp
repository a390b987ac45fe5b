#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lasercov/coverage.hpp"
#include "lasercov/errors.hpp"
#include "lasercov/rng.hpp"
#include "lasercov/scenario.hpp"

namespace lasercov {

enum class SamplingMode { DirectNearest, WindowPpp };

/// Monte Carlo run description. Results are fully determined by the seed,
/// iteration count, and sampling mode; the worker count only partitions the
/// work and never changes the estimate.
struct SimulationConfig {
  std::uint64_t iterations = 100000;
  SamplingMode sampling = SamplingMode::DirectNearest;
  double window_half_width = 150000.0;  // m, WindowPpp only
  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const {
    if (iterations < 1)
      throw std::invalid_argument("simulation: iterations must be >= 1");
    if (workers < 1)
      throw std::invalid_argument("simulation: workers must be >= 1");
    if (sampling == SamplingMode::WindowPpp && !(window_half_width > 0.0))
      throw std::invalid_argument("simulation: window_half_width must be positive");
  }

  /// The window must dwarf the typical nearest-neighbor distance or the
  /// minimum over the realized points would be biased upward.
  void validate_window(double lbd_density) const {
    if (sampling != SamplingMode::WindowPpp) return;
    const double required = 10.0 / std::sqrt(lbd_density * std::numbers::pi);
    if (window_half_width < required)
      throw ConfigError(
          "simulation: window_half_width " + std::to_string(window_half_width) +
              " m is below the minimum " + std::to_string(required) +
              " m for this density",
          "window_half_width");
  }
};

struct CoverageEstimate {
  CoverageMetric metric = CoverageMetric::Energy;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
};

/// One draw of the distance to the nearest director. DirectNearest inverts
/// the closed-form CDF; WindowPpp realizes the full point process in a
/// square window and takes the minimum norm, re-drawing the (practically
/// impossible) empty window.
inline double sample_nearest_distance(const NetworkParams& network,
                                      const SimulationConfig& config,
                                      RandomStream& rng) {
  if (config.sampling == SamplingMode::DirectNearest) {
    return std::sqrt(-std::log(rng.uniform01()) /
                     (std::numbers::pi * network.lbd_density));
  }
  const double w = config.window_half_width;
  const double mean_count = network.lbd_density * (2.0 * w) * (2.0 * w);
  for (;;) {
    const std::uint64_t n = rng.poisson(mean_count);
    if (n == 0) continue;
    double best2 = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = rng.uniform(-w, w);
      const double y = rng.uniform(-w, w);
      best2 = std::min(best2, x * x + y * y);
    }
    return std::sqrt(best2);
  }
}

namespace detail {

// Success indicator of one realization: draw the serving distance and the
// fade, then test the requested condition(s) on that same draw.
inline bool coverage_indicator(const Scenario& s, CoverageMetric metric,
                               const SimulationConfig& config,
                               double energy_threshold, double snr_threshold,
                               RandomStream& rng) {
  const double r = sample_nearest_distance(s.network, config, rng);
  const double prec = received_power(s.channel, s.network.altitude, r);
  if (metric == CoverageMetric::EnergyNoTurbulence)
    return prec >= energy_threshold;
  const double faded = fading_at(s.turbulence, s.network.altitude, r).sample(rng) * prec;
  switch (metric) {
    case CoverageMetric::Energy:
      return faded >= energy_threshold;
    case CoverageMetric::Snr:
      return faded >= snr_threshold;
    case CoverageMetric::Joint:
      return faded >= energy_threshold && faded >= snr_threshold;
    default:
      return false;
  }
}

}  // namespace detail

/// Empirical coverage probability over independent realizations. Each
/// iteration owns the random stream indexed by its iteration number, so the
/// estimate is bit-identical across runs and across any worker partition.
inline CoverageEstimate estimate_coverage(const Scenario& s, CoverageMetric metric,
                                          const SimulationConfig& config) {
  s.validate();
  config.validate();
  config.validate_window(s.network.lbd_density);

  const double energy_threshold = s.energy_received_threshold();
  const double snr_threshold = s.snr_received_threshold();
  const std::uint64_t n = config.iterations;
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(config.workers, n));

  auto count_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t successes = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomStream rng(config.seed, i);
      successes += detail::coverage_indicator(s, metric, config, energy_threshold,
                                              snr_threshold, rng);
    }
    return successes;
  };

  std::uint64_t successes = 0;
  if (workers == 1) {
    successes = count_range(0, n);
  } else {
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = n * static_cast<std::uint64_t>(w) /
                                  static_cast<std::uint64_t>(workers);
      const std::uint64_t end = n * static_cast<std::uint64_t>(w + 1) /
                                static_cast<std::uint64_t>(workers);
      pool.emplace_back([&partial, &count_range, w, begin, end] {
        partial[static_cast<std::size_t>(w)] = count_range(begin, end);
      });
    }
    for (auto& t : pool) t.join();
    for (std::uint64_t c : partial) successes += c;
  }

  CoverageEstimate out;
  out.metric = metric;
  out.iterations = n;
  out.seed = config.seed;
  out.estimate = static_cast<double>(successes) / static_cast<double>(n);
  out.std_error =
      std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n));
  return out;
}

}  // namespace lasercov
