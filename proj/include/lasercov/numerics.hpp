#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lasercov/errors.hpp"

namespace lasercov {

/// Tolerances and budget for the adaptive integrator. Integration stops once
/// the error estimate drops below max(abs_tol, rel_tol * |result|).
struct QuadratureSpec {
  int max_subdivisions = 2000;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;

  void validate() const {
    if (max_subdivisions < 1)
      throw std::invalid_argument("quadrature: max_subdivisions must be >= 1");
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
      throw std::invalid_argument("quadrature: tolerances must be non-negative");
    if (abs_tol == 0.0 && rel_tol == 0.0)
      throw std::invalid_argument("quadrature: abs_tol and rel_tol cannot both be zero");
  }
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1]. Even-indexed Kronrod nodes extend the
// embedded 7-point Gauss rule whose nodes sit at the odd indices.
inline constexpr double kGk15Nodes[8] = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864093,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0,
};

inline constexpr double kGk15KronrodWeights[8] = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318854,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923465,
    0.20948214108472782801299917489171,
};

inline constexpr double kGk15GaussWeights[4] = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633,
};

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
PanelEstimate gauss_kronrod_15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = kGk15KronrodWeights[7] * f(mid);
  double gauss = kGk15GaussWeights[3] * f(mid);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGk15Nodes[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kGk15KronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGk15GaussWeights[i / 2] * pair;
  }
  PanelEstimate out;
  out.value = kronrod * half;
  // QUADPACK-style conservative sharpening of the raw |K15 - G7| gap.
  const double raw = std::abs((kronrod - gauss) * half);
  out.error = raw;
  if (raw > 0.0) {
    const double scale = std::abs(out.value);
    if (scale > 0.0) {
      const double rel = raw / scale;
      out.error = scale * std::min(1.0, std::pow(200.0 * rel, 1.5));
    }
  }
  return out;
}

struct Segment {
  double a;
  double b;
  PanelEstimate est;
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. `breakpoints` lists
/// interior abscissae where f is known to kink or jump; seeding panels there
/// keeps narrow features from slipping between quadrature nodes.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {},
                 const std::vector<double>& breakpoints = {}) {
  spec.validate();
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("quadrature: interval must satisfy a <= b");
  }

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double x : breakpoints)
    if (x > a && x < b && std::isfinite(x)) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<detail::Segment> segments;
  segments.reserve(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    segments.push_back({cuts[i], cuts[i + 1],
                        detail::gauss_kronrod_15(f, cuts[i], cuts[i + 1])});

  auto total = [&segments] {
    double value = 0.0, error = 0.0;
    for (const auto& s : segments) {
      value += s.est.value;
      error += s.est.error;
    }
    return detail::PanelEstimate{value, error};
  };

  int splits = 0;
  for (;;) {
    const auto [value, error] = total();
    if (!std::isfinite(value) || !std::isfinite(error))
      throw NumericalError("quadrature: integrand produced a non-finite value");
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
    if (error <= target) return value;
    if (splits >= spec.max_subdivisions)
      throw QuadratureError("quadrature: subdivision budget exhausted", value, error);

    auto worst = std::max_element(
        segments.begin(), segments.end(),
        [](const auto& l, const auto& r) { return l.est.error < r.est.error; });
    const double lo = worst->a, hi = worst->b, mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi))
      throw QuadratureError("quadrature: interval too narrow to refine", value, error);
    *worst = {lo, mid, detail::gauss_kronrod_15(f, lo, mid)};
    segments.push_back({mid, hi, detail::gauss_kronrod_15(f, mid, hi)});
    ++splits;
  }
}

/// Principal branch of the Lambert W function, defined on [-1/e, inf).
/// Solves w * exp(w) = x to near machine precision via Halley iteration.
inline double lambert_w0(double x) {
  constexpr double kInvE = 0.36787944117144232160;
  if (std::isnan(x) || x < -kInvE)
    throw std::domain_error("lambert_w0: argument below -1/e");
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.3) {
    // Branch-point series in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  } else if (x < 2.0) {
    w = x / (1.0 + x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

/// Standard normal CDF.
inline double std_normal_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace detail {

// Mass beyond the truncation point of the substituted integral is
// exp(-kNearestTailCutoff) ~ 9.4e-14, below every tolerance used here.
inline constexpr double kNearestTailCutoff = 30.0;

}  // namespace detail

/// Expectation E[g(R)] of a probability-valued function of the distance R to
/// the nearest point of a planar Poisson process with the given density.
/// R has density 2 pi rho r exp(-rho pi r^2); substituting u = rho pi r^2
/// reduces the expectation to the integral of g(r(u)) exp(-u) over u >= 0.
/// `hint_radii` marks radii where g jumps (for example a coverage cutoff).
template <class G>
double integrate_expectation_over_nearest_distance(
    G&& prob_of_radius, double density, const QuadratureSpec& spec = {},
    const std::vector<double>& hint_radii = {}) {
  if (!(density > 0.0) || !std::isfinite(density))
    throw std::invalid_argument("nearest-distance expectation: density must be positive");

  const double rho_pi = density * std::numbers::pi;
  auto integrand = [&](double u) {
    return prob_of_radius(std::sqrt(u / rho_pi)) * std::exp(-u);
  };

  // Geometric seeding near zero plus mapped hints so short-radius features
  // are never bridged by a single wide panel.
  std::vector<double> cuts = {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 1.0, 5.0};
  for (double r : hint_radii) {
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    const double u = rho_pi * r * r;
    if (u < detail::kNearestTailCutoff) cuts.push_back(u);
  }

  const double value =
      integrate(integrand, 0.0, detail::kNearestTailCutoff, spec, cuts);
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace lasercov
