#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lasercov/channel.hpp"
#include "lasercov/errors.hpp"
#include "lasercov/numerics.hpp"
#include "lasercov/scenario.hpp"

namespace lasercov {

enum class CoverageMetric { EnergyNoTurbulence, Energy, Snr, Joint };

inline const char* to_string(CoverageMetric m) noexcept {
  switch (m) {
    case CoverageMetric::EnergyNoTurbulence: return "energy_no_turbulence";
    case CoverageMetric::Energy: return "energy";
    case CoverageMetric::Snr: return "snr";
    case CoverageMetric::Joint: return "joint";
  }
  return "unknown";
}

/// Largest ground radius at which the harvested share of the (fade-free)
/// received power still covers the total consumed power. Empty when the
/// link cannot sustain the load even directly overhead.
inline std::optional<double> critical_radius(const Scenario& s) {
  return critical_ground_radius(s.channel, s.network.altitude,
                                s.energy_received_threshold());
}

/// Threshold ratio deciding which condition binds the joint coverage:
/// above 1 the energy condition implies the SNR condition, below 1 the
/// reverse holds (both conditions compare the same faded received power
/// against fixed thresholds).
inline double k_factor(const Scenario& s) {
  return s.energy_to_snr_threshold_ratio();
}

namespace detail {

// Probability that the fade-scaled received power at ground radius r meets
// `threshold`, under the scenario's turbulence law evaluated at r.
inline double exceed_probability(const Scenario& s, double threshold, double r) {
  const double prec = received_power(s.channel, s.network.altitude, r);
  if (!(prec > 0.0)) return 0.0;
  const TurbulenceFading fade = fading_at(s.turbulence, s.network.altitude, r);
  return 1.0 - fade.cdf(threshold / prec);
}

// P(h * p_rec(R) >= threshold) with R the nearest-director distance.
// Fade-free scenarios reduce to the closed-form void probability of the
// disc of the critical radius; otherwise the expectation is integrated
// with the critical radius seeded as a breakpoint (the integrand kinks
// there, and jumps there in the vanishing-variance limit).
inline double received_threshold_coverage(const Scenario& s, double threshold,
                                          const QuadratureSpec& spec) {
  if (std::isinf(threshold)) return 0.0;
  const std::optional<double> r_star =
      critical_ground_radius(s.channel, s.network.altitude, threshold);
  if (s.turbulence.model == TurbulenceModel::None) {
    if (!r_star) return 0.0;
    return -std::expm1(-s.network.lbd_density * std::numbers::pi * *r_star *
                       *r_star);
  }
  std::vector<double> hints;
  if (r_star) hints.push_back(*r_star);
  auto g = [&](double r) { return exceed_probability(s, threshold, r); };
  return integrate_expectation_over_nearest_distance(g, s.network.lbd_density,
                                                     spec, hints);
}

}  // namespace detail

/// Probability that the nearest director's fade-free link sustains the total
/// consumed power: 1 - exp(-density * pi * critical_radius^2).
inline double energy_coverage_no_turbulence(const Scenario& s) {
  const std::optional<double> r_star = critical_radius(s);
  if (!r_star) return 0.0;
  return -std::expm1(-s.network.lbd_density * std::numbers::pi * *r_star *
                     *r_star);
}

/// Probability that the harvested power from the nearest director covers the
/// total consumed power, averaged over distance and turbulence fading.
inline double energy_coverage(const Scenario& s, const QuadratureSpec& spec = {}) {
  return detail::received_threshold_coverage(s, s.energy_received_threshold(),
                                             spec);
}

/// Probability that the detected SNR from the nearest director meets the
/// configured threshold, averaged over distance and turbulence fading.
inline double snr_coverage(const Scenario& s, const QuadratureSpec& spec = {}) {
  return detail::received_threshold_coverage(s, s.snr_received_threshold(),
                                             spec);
}

/// Probability that the energy and SNR conditions hold simultaneously. Both
/// compare the same scalar against fixed thresholds, so the joint event is
/// exactly the binding single condition.
inline double joint_coverage(const Scenario& s, const QuadratureSpec& spec = {}) {
  return k_factor(s) > 1.0 ? energy_coverage(s, spec) : snr_coverage(s, spec);
}

inline double analytic_coverage(const Scenario& s, CoverageMetric metric,
                                const QuadratureSpec& spec = {}) {
  switch (metric) {
    case CoverageMetric::EnergyNoTurbulence:
      return energy_coverage_no_turbulence(s);
    case CoverageMetric::Energy:
      return energy_coverage(s, spec);
    case CoverageMetric::Snr:
      return snr_coverage(s, spec);
    case CoverageMetric::Joint:
      return joint_coverage(s, spec);
  }
  throw std::invalid_argument("coverage: unknown metric");
}

namespace detail {

inline constexpr double kDensityBracketLo = 1e-12;  // 1/m^2
inline constexpr double kDensityBracketHi = 1e-2;   // 1/m^2
inline constexpr int kDensityBisectionIters = 200;
inline constexpr double kDensityTargetTol = 1e-6;

}  // namespace detail

/// Smallest director density whose coverage under `metric` reaches `target`.
/// Coverage is strictly increasing in the density, so the unique root is
/// found by bisection (closed-form inversion in the fade-free case).
/// Throws UncoverableError when no density can reach the target and
/// NumericalError when the root lies outside the searched bracket.
inline double required_density(const Scenario& s, double target,
                               CoverageMetric metric,
                               const QuadratureSpec& spec = {}) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("required_density: target must lie in (0, 1)");

  // Which received-power threshold must be attainable for this metric.
  const CoverageMetric effective =
      metric == CoverageMetric::Joint
          ? (k_factor(s) > 1.0 ? CoverageMetric::Energy : CoverageMetric::Snr)
          : metric;
  const double threshold = effective == CoverageMetric::Snr
                               ? s.snr_received_threshold()
                               : s.energy_received_threshold();
  const std::optional<double> r_star =
      critical_ground_radius(s.channel, s.network.altitude, threshold);
  if (!r_star)
    throw UncoverableError(
        "required_density: link cannot meet the target even directly overhead "
        "(no critical radius exists for the binding condition)");

  if (effective == CoverageMetric::EnergyNoTurbulence ||
      s.turbulence.model == TurbulenceModel::None) {
    const double density =
        -std::log1p(-target) / (std::numbers::pi * *r_star * *r_star);
    // The exact inversion still honors the searched bracket so the error
    // contract matches the bisection path.
    if (density > detail::kDensityBracketHi)
      throw UncoverableError(
          "required_density: the target needs density " +
          std::to_string(density) + " /m^2, beyond the searched maximum " +
          std::to_string(detail::kDensityBracketHi));
    if (density < detail::kDensityBracketLo)
      throw NumericalError(
          "required_density: the target is already exceeded at the lowest "
          "searched density " + std::to_string(detail::kDensityBracketLo));
    return density;
  }

  Scenario probe = s;
  auto coverage_at = [&](double density) {
    probe.network.lbd_density = density;
    return analytic_coverage(probe, effective, spec);
  };

  double lo = detail::kDensityBracketLo;
  double hi = detail::kDensityBracketHi;
  const double cov_lo = coverage_at(lo);
  const double cov_hi = coverage_at(hi);
  if (cov_lo > target)
    throw NumericalError(
        "required_density: target already exceeded at the lowest searched "
        "density " + std::to_string(lo) + " (coverage " +
        std::to_string(cov_lo) + ")");
  if (cov_hi < target)
    throw UncoverableError(
        "required_density: coverage at the highest searched density " +
        std::to_string(hi) + " is only " + std::to_string(cov_hi) +
        ", below the target");

  for (int i = 0; i < detail::kDensityBisectionIters; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (coverage_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  const double density = std::sqrt(lo * hi);
  if (std::abs(coverage_at(density) - target) > detail::kDensityTargetTol)
    throw NumericalError(
        "required_density: bisection finished without matching the target "
        "within tolerance (density " + std::to_string(density) + ")");
  return density;
}

}  // namespace lasercov
