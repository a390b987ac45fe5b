#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lasercov/errors.hpp"
#include "lasercov/numerics.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace lasercov;

TEST_CASE("lambert_w0 matches reference values", "[numerics]") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK_THAT(lambert_w0(1.0), WithinRel(0.567143290409783873, 1e-14));
  CHECK_THAT(lambert_w0(std::numbers::e), WithinRel(1.0, 1e-14));
  CHECK_THAT(lambert_w0(10.0), WithinRel(1.7455280027406993831, 1e-14));
  CHECK_THAT(lambert_w0(1e10), WithinRel(20.028685413304950781, 1e-14));
  CHECK_THAT(lambert_w0(-std::exp(-1.0)), WithinAbs(-1.0, 1e-6));
}

TEST_CASE("lambert_w0 satisfies w*exp(w) = x across the domain", "[numerics]") {
  std::vector<double> xs;
  for (int i = 0; i <= 200; ++i)
    xs.push_back(std::pow(10.0, -8.0 + 16.0 * i / 200.0));
  const double inv_e = std::exp(-1.0);
  for (int i = 1; i <= 40; ++i)
    xs.push_back(-inv_e + inv_e * std::pow(10.0, -9.0 + 9.0 * i / 40.0));
  for (const double x : xs) {
    const double w = lambert_w0(x);
    const double residual = std::abs(w * std::exp(w) - x);
    INFO("x = " << x << " w = " << w);
    CHECK(residual <= 1e-12 * std::max(std::abs(x), 1.0));
  }
}

TEST_CASE("lambert_w0 rejects arguments below the branch point", "[numerics]") {
  CHECK_THROWS_AS(lambert_w0(-0.4), std::domain_error);
  CHECK_THROWS_AS(lambert_w0(-std::exp(-1.0) - 1e-6), std::domain_error);
}

TEST_CASE("standard normal cdf reference values and symmetry", "[numerics]") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK_THAT(std_normal_cdf(1.0), WithinAbs(0.84134474606854294859, 1e-15));
  CHECK_THAT(std_normal_cdf(-1.0), WithinAbs(1.0 - 0.84134474606854294859, 1e-15));
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double z = -6.0 + 12.0 * i / 100.0;
    const double p = std_normal_cdf(z);
    CHECK_THAT(p + std_normal_cdf(-z), WithinAbs(1.0, 1e-15));
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("adaptive quadrature integrates smooth functions", "[numerics]") {
  const double sixth = integrate([](double x) { return x * x * x * x * x; }, 0.0, 1.0);
  CHECK_THAT(sixth, WithinRel(1.0 / 6.0, 1e-14));

  const double two = integrate([](double x) { return std::sin(x); }, 0.0,
                               std::numbers::pi);
  CHECK_THAT(two, WithinRel(2.0, 1e-12));

  const double em1 = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK_THAT(em1, WithinRel(std::numbers::e - 1.0, 1e-13));
}

TEST_CASE("quadrature resolves discontinuities and narrow features", "[numerics]") {
  const auto step = [](double x) { return x < 0.3 ? 1.0 : 0.0; };
  CHECK_THAT(integrate(step, 0.0, 1.0, {}, {0.3}), WithinRel(0.3, 1e-12));

  // A bump of width 1e-3 inside a unit panel: adaptivity must find it
  // without a seeded breakpoint.
  const double sigma = 1e-3;
  const auto bump = [&](double x) {
    const double z = (x - 0.5) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  CHECK_THAT(integrate(bump, 0.0, 1.0), WithinRel(1.0, 1e-9));
}

TEST_CASE("quadrature reports its failure modes", "[numerics]") {
  QuadratureSpec tight;
  tight.max_subdivisions = 1;
  tight.abs_tol = 1e-300;
  tight.rel_tol = 1e-300;
  const auto wiggle = [](double x) { return std::sin(40.0 * x) * std::exp(x); };
  try {
    integrate(wiggle, 0.0, 10.0, tight);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.residual() > 0.0);
  }

  const auto poison = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(integrate(poison, 0.0, 1.0), NumericalError);

  QuadratureSpec bad;
  bad.abs_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  QuadratureSpec none;
  none.max_subdivisions = 0;
  CHECK_THROWS_AS(none.validate(), std::invalid_argument);
}

TEST_CASE("nearest-distance expectation integrates known laws", "[numerics]") {
  const double density = 0.52e-6;
  CHECK_THAT(integrate_expectation_over_nearest_distance(
                 [](double) { return 1.0; }, density),
             WithinAbs(1.0, 1e-12));

  // Expectation of an indicator is the nearest-distance CDF at the cutoff.
  const double cutoff = 1396.5914362251865;
  const auto indicator = [&](double r) { return r <= cutoff ? 1.0 : 0.0; };
  CHECK_THAT(integrate_expectation_over_nearest_distance(indicator, density, {},
                                                         {cutoff}),
             WithinAbs(0.9586771184684448, 1e-10));

  // E[exp(-u)] with u ~ Exp(1) is 1/2.
  const double rho_pi = density * std::numbers::pi;
  const auto decay = [&](double r) { return std::exp(-rho_pi * r * r); };
  CHECK_THAT(integrate_expectation_over_nearest_distance(decay, density),
             WithinAbs(0.5, 1e-10));

  CHECK_THROWS_AS(integrate_expectation_over_nearest_distance(
                      [](double) { return 1.0; }, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_expectation_over_nearest_distance(
                      [](double) { return 1.0; }, -1.0),
                  std::invalid_argument);
}
