#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lasercov/coverage.hpp"
#include "lasercov/errors.hpp"
#include "lasercov/montecarlo.hpp"

using Catch::Matchers::WithinAbs;
using namespace lasercov;

namespace {

double ks_against(const std::vector<double>& sorted,
                  const std::function<double(double)>& cdf) {
  const int n = static_cast<int>(sorted.size());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    ks = std::max(ks, std::abs(f - double(i) / n));
    ks = std::max(ks, std::abs(double(i + 1) / n - f));
  }
  return ks;
}

}  // namespace

TEST_CASE("direct nearest-distance sampling matches the closed-form law",
          "[montecarlo]") {
  NetworkParams net;
  net.lbd_density = 1e-6;
  SimulationConfig config;
  RandomStream rng(101, 0);
  const int n = 5000;
  std::vector<double> draws(n);
  for (double& d : draws) d = sample_nearest_distance(net, config, rng);
  std::sort(draws.begin(), draws.end());
  const double rho_pi = net.lbd_density * std::numbers::pi;
  const double ks = ks_against(
      draws, [&](double r) { return -std::expm1(-rho_pi * r * r); });
  CHECK(ks * std::sqrt(double(n)) < 1.95);
}

TEST_CASE("window sampling agrees with the closed-form law", "[montecarlo]") {
  NetworkParams net;
  net.lbd_density = 0.52e-6;
  SimulationConfig config;
  config.sampling = SamplingMode::WindowPpp;
  config.window_half_width = 8000.0;
  config.validate_window(net.lbd_density);
  RandomStream rng(103, 0);
  const int n = 3000;
  std::vector<double> draws(n);
  for (double& d : draws) d = sample_nearest_distance(net, config, rng);
  std::sort(draws.begin(), draws.end());
  const double rho_pi = net.lbd_density * std::numbers::pi;
  const double ks = ks_against(
      draws, [&](double r) { return -std::expm1(-rho_pi * r * r); });
  CHECK(ks * std::sqrt(double(n)) < 1.95);
}

TEST_CASE("window width must dwarf the typical nearest distance", "[montecarlo]") {
  Scenario s;
  SimulationConfig config;
  config.sampling = SamplingMode::WindowPpp;
  config.window_half_width = 7000.0;  // minimum for 0.52e-6 is ~7824 m
  config.iterations = 10;
  try {
    estimate_coverage(s, CoverageMetric::Energy, config);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "window_half_width");
  }
  config.window_half_width = 8000.0;
  CHECK_NOTHROW(estimate_coverage(s, CoverageMetric::Energy, config));
}

TEST_CASE("estimates agree with the analytic probabilities", "[montecarlo]") {
  Scenario s;
  // A threshold high enough that the snr metric is informative rather than
  // almost surely satisfied.
  s.snr_threshold_beta = snr_threshold_from_db(61.0);
  SimulationConfig config;
  config.iterations = 100000;
  config.seed = 2024;

  const struct {
    CoverageMetric metric;
    double analytic;
  } cases[] = {
      {CoverageMetric::EnergyNoTurbulence, energy_coverage_no_turbulence(s)},
      {CoverageMetric::Energy, energy_coverage(s)},
      {CoverageMetric::Snr, snr_coverage(s)},
      {CoverageMetric::Joint, joint_coverage(s)},
  };
  for (const auto& c : cases) {
    const CoverageEstimate est = estimate_coverage(s, c.metric, config);
    INFO(to_string(c.metric) << ": analytic " << c.analytic << " vs mc "
                             << est.estimate << " +- " << est.std_error);
    CHECK(std::abs(est.estimate - c.analytic) <= 3.0 * est.std_error);
    CHECK(est.iterations == config.iterations);
    CHECK(est.seed == config.seed);
    CHECK_THAT(est.std_error,
               WithinAbs(std::sqrt(est.estimate * (1.0 - est.estimate) /
                                   double(config.iterations)),
                         1e-15));
  }
}

TEST_CASE("window and direct sampling give consistent estimates", "[montecarlo]") {
  const Scenario s;
  SimulationConfig direct;
  direct.iterations = 40000;
  direct.seed = 5;
  SimulationConfig window = direct;
  window.sampling = SamplingMode::WindowPpp;
  window.window_half_width = 8000.0;
  window.seed = 6;
  const CoverageEstimate a = estimate_coverage(s, CoverageMetric::Energy, direct);
  const CoverageEstimate b = estimate_coverage(s, CoverageMetric::Energy, window);
  const double combined =
      std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  CHECK(std::abs(a.estimate - b.estimate) <= 3.0 * combined);
}

TEST_CASE("joint estimate equals the binding metric estimate on shared seeds",
          "[montecarlo]") {
  SimulationConfig config;
  config.iterations = 30000;
  config.seed = 77;

  Scenario energy_bound;  // defaults: threshold ratio above 1
  REQUIRE(k_factor(energy_bound) > 1.0);
  CHECK(estimate_coverage(energy_bound, CoverageMetric::Joint, config).estimate ==
        estimate_coverage(energy_bound, CoverageMetric::Energy, config).estimate);

  Scenario snr_bound;
  snr_bound.channel.split_delta_s = 1e-6;
  snr_bound.snr_threshold_beta = snr_threshold_from_db(60.0);
  REQUIRE(k_factor(snr_bound) < 1.0);
  CHECK(estimate_coverage(snr_bound, CoverageMetric::Joint, config).estimate ==
        estimate_coverage(snr_bound, CoverageMetric::Snr, config).estimate);
}

TEST_CASE("full power split leaves nothing to harvest", "[montecarlo]") {
  Scenario s;
  s.channel.split_delta_s = 1.0;
  SimulationConfig config;
  config.iterations = 5000;
  const CoverageEstimate est = estimate_coverage(s, CoverageMetric::Energy, config);
  CHECK(est.estimate == 0.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("estimates are independent of the worker partition", "[montecarlo]") {
  const Scenario s;
  SimulationConfig config;
  config.iterations = 20000;
  config.seed = 31;
  config.workers = 1;
  const double reference =
      estimate_coverage(s, CoverageMetric::Energy, config).estimate;
  for (const int workers : {2, 3, 8, 64}) {
    config.workers = workers;
    INFO("workers = " << workers);
    CHECK(estimate_coverage(s, CoverageMetric::Energy, config).estimate ==
          reference);
  }
}

TEST_CASE("estimates are deterministic in the seed", "[montecarlo]") {
  const Scenario s;
  SimulationConfig config;
  config.iterations = 20000;
  config.seed = 8;
  const double first =
      estimate_coverage(s, CoverageMetric::Energy, config).estimate;
  CHECK(estimate_coverage(s, CoverageMetric::Energy, config).estimate == first);
  config.seed = 9;
  CHECK(estimate_coverage(s, CoverageMetric::Energy, config).estimate != first);
}

TEST_CASE("tabulated turbulence is consistent end to end", "[montecarlo]") {
  // Tabulate a dense grid of a fixed log-normal law and check the analytic
  // quadrature against sampling under the same tabulated model.
  std::vector<double> h, f;
  const TurbulenceFading ln = TurbulenceFading::log_normal(0.054);
  for (int i = 0; i <= 400; ++i) {
    h.push_back(0.05 + 5.0 * i / 400.0);
    f.push_back(ln.cdf(h.back()));
  }
  Scenario s;
  s.turbulence.model = TurbulenceModel::Tabulated;
  s.turbulence.table = std::make_shared<const TabulatedCdf>(h, f);

  const double analytic = energy_coverage(s);
  SimulationConfig config;
  config.iterations = 100000;
  config.seed = 2025;
  const CoverageEstimate est = estimate_coverage(s, CoverageMetric::Energy, config);
  INFO("analytic " << analytic << " vs mc " << est.estimate << " +- "
                   << est.std_error);
  CHECK(std::abs(est.estimate - analytic) <= 3.0 * est.std_error);
}

TEST_CASE("simulation config validation", "[montecarlo]") {
  SimulationConfig config;
  config.iterations = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SimulationConfig{};
  config.workers = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SimulationConfig{};
  config.sampling = SamplingMode::WindowPpp;
  config.window_half_width = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
