// Minimal library walkthrough: build the default scenario, look at the link
// budget, compare analytic coverage with a Monte Carlo estimate, and size
// the network for a coverage target.

#include <cstdio>

#include "lasercov/lasercov.hpp"

int main() {
  using namespace lasercov;

  Scenario s;
  s.validate();

  std::printf("received power overhead:    %.3f W\n",
              received_power(s.channel, s.network.altitude, 0.0));
  std::printf("total consumed power:       %.3f W\n", s.power.consumed_power());
  if (const auto r_star = critical_radius(s))
    std::printf("critical ground radius:     %.1f m\n", *r_star);

  std::printf("\nanalytic coverage at %.3g directors per m^2\n",
              s.network.lbd_density);
  std::printf("  energy (no turbulence):   %.6f\n", energy_coverage_no_turbulence(s));
  std::printf("  energy:                   %.6f\n", energy_coverage(s));
  std::printf("  snr:                      %.6f\n", snr_coverage(s));
  std::printf("  joint:                    %.6f\n", joint_coverage(s));

  SimulationConfig sim;
  sim.iterations = 200000;
  sim.seed = 7;
  const CoverageEstimate mc = estimate_coverage(s, CoverageMetric::Energy, sim);
  std::printf("\nmonte carlo energy:         %.6f +/- %.6f (%llu iterations)\n",
              mc.estimate, mc.std_error,
              static_cast<unsigned long long>(mc.iterations));

  const double density = required_density(s, 0.9, CoverageMetric::Energy);
  std::printf("\ndensity for 90%% energy coverage: %.4g per m^2 "
              "(%.2f directors per 10 km^2)\n",
              density, density * 1e7);
  return 0;
}
