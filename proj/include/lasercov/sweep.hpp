#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lasercov/config.hpp"
#include "lasercov/coverage.hpp"
#include "lasercov/errors.hpp"
#include "lasercov/montecarlo.hpp"
#include "lasercov/scenario.hpp"
#include "lasercov/version.hpp"

namespace lasercov {

enum class Engine { Analytic, MonteCarlo, Both };

inline Engine parse_engine(const std::string& name) {
  if (name == "analytic") return Engine::Analytic;
  if (name == "montecarlo") return Engine::MonteCarlo;
  if (name == "both") return Engine::Both;
  throw ConfigError("engine must be 'analytic', 'montecarlo' or 'both', got '" +
                        name + "'",
                    "engine");
}

inline CoverageMetric parse_metric(const std::string& name) {
  if (name == "energy") return CoverageMetric::Energy;
  if (name == "energy_no_turbulence") return CoverageMetric::EnergyNoTurbulence;
  if (name == "snr") return CoverageMetric::Snr;
  if (name == "joint") return CoverageMetric::Joint;
  throw ConfigError(
      "metric must be one of energy, energy_no_turbulence, snr, joint; got '" +
          name + "'",
      "metric");
}

/// Set the swept parameter on a scenario. Axis names are part of the CLI
/// surface; `beta_db` is the only dB-valued axis and converts on entry.
inline void apply_axis(Scenario& s, const std::string& axis, double value) {
  if (axis == "lbd_density") {
    s.network.lbd_density = value;
  } else if (axis == "beta_db") {
    s.snr_threshold_beta = snr_threshold_from_db(value);
  } else if (axis == "delta_s") {
    s.channel.split_delta_s = value;
  } else if (axis == "p_comm") {
    s.power.p_comm = value;
  } else {
    throw ConfigError(
        "axis must be one of lbd_density, beta_db, delta_s, p_comm; got '" +
            axis + "'",
        "axis");
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("axis " + axis + " = " + detail::format_double(value) +
                          ": " + e.what(),
                      "axis");
  }
}

/// One output row. `std_error` and `n_iterations` are populated only for
/// Monte Carlo rows; analytic rows leave the columns empty.
struct SweepRow {
  std::string axis;
  double axis_value = 0.0;
  CoverageMetric metric = CoverageMetric::Energy;
  bool montecarlo = false;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_iterations = 0;
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n == 1) {
    out.push_back(a);
    return out;
  }
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

inline std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> out;
  if (!(a > 0.0) || !(b > 0.0))
    throw ConfigError("log grid endpoints must be positive", "grid");
  if (n == 1) {
    out.push_back(a);
    return out;
  }
  const double la = std::log(a), lb = std::log(b);
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(std::exp(la + (lb - la) * static_cast<double>(i) /
                                    static_cast<double>(n - 1)));
  out.front() = a;
  out.back() = b;
  return out;
}

/// Evaluate the chosen metrics over a strictly increasing grid of one
/// parameter. Rows are ordered by grid index, then metric, then engine
/// (analytic before Monte Carlo). A failing grid point aborts the sweep
/// with the point identified in the error message.
inline std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& axis,
                                       const std::vector<double>& grid,
                                       const std::vector<CoverageMetric>& metrics,
                                       Engine engine, const SimulationConfig& sim,
                                       const QuadratureSpec& quad = {},
                                       const std::string& axis_label = {}) {
  if (grid.empty()) throw ConfigError("sweep grid must be nonempty", "grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i]))
      throw ConfigError("sweep grid must be strictly increasing", "grid");
  if (metrics.empty()) throw ConfigError("sweep needs at least one metric", "metrics");

  // Validate every grid point before computing anything: grid mistakes are
  // config errors, not mid-run numerical failures.
  for (const double v : grid) {
    Scenario probe = base;
    apply_axis(probe, axis, v);
  }

  const std::string label = axis_label.empty() ? axis : axis_label;
  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * metrics.size() * (engine == Engine::Both ? 2 : 1));
  for (const double v : grid) {
    Scenario point = base;
    apply_axis(point, axis, v);
    for (const CoverageMetric metric : metrics) {
      if (engine != Engine::MonteCarlo) {
        SweepRow row;
        row.axis = label;
        row.axis_value = v;
        row.metric = metric;
        row.montecarlo = false;
        try {
          row.value = analytic_coverage(point, metric, quad);
        } catch (const QuadratureError& e) {
          throw NumericalError("sweep: quadrature failed at " + label + " = " +
                               detail::format_double(v) + " (" + e.what() + ")");
        }
        rows.push_back(std::move(row));
      }
      if (engine != Engine::Analytic) {
        const CoverageEstimate est = estimate_coverage(point, metric, sim);
        SweepRow row;
        row.axis = label;
        row.axis_value = v;
        row.metric = metric;
        row.montecarlo = true;
        row.value = est.estimate;
        row.std_error = est.std_error;
        row.n_iterations = est.iterations;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Provenance header serialized as comments before the CSV payload.
struct RunManifest {
  std::string command;
  std::uint64_t fingerprint = 0;
  std::string version = kVersion;
  std::optional<std::uint64_t> seed;
  std::string timestamp;
};

/// UTC ISO-8601 timestamp. Honors SOURCE_DATE_EPOCH so archival runs can be
/// reproduced byte for byte.
inline std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long forced = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') t = static_cast<std::time_t>(forced);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(std::ostream& os, const RunManifest& m) {
  os << "# command: " << m.command << "\n";
  os << "# fingerprint: " << to_hex(m.fingerprint) << "\n";
  os << "# version: " << m.version << "\n";
  if (m.seed) os << "# seed: " << *m.seed << "\n";
  os << "# timestamp: " << m.timestamp << "\n";
}

inline void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "axis,axis_value,metric,engine,value,std_error,n_iterations\n";
  for (const SweepRow& row : rows) {
    os << row.axis << ',' << detail::format_double(row.axis_value) << ','
       << to_string(row.metric) << ','
       << (row.montecarlo ? "montecarlo" : "analytic") << ','
       << detail::format_double(row.value) << ',';
    if (row.montecarlo)
      os << detail::format_double(row.std_error) << ',' << row.n_iterations;
    else
      os << ',';
    os << '\n';
  }
}

/// A figure preset: a scenario override plus the swept axis and grid.
struct PresetJob {
  Scenario scenario;
  std::string axis;
  std::string label;
  std::vector<double> grid;
  std::vector<CoverageMetric> metrics;
};

/// Named presets reproducing the reference coverage curves: energy coverage
/// vs density at two communication loads, SNR coverage vs density at three
/// thresholds, joint coverage vs SNR threshold, and joint coverage vs the
/// power split.
inline std::vector<PresetJob> preset_jobs(const std::string& name,
                                          const Scenario& base) {
  std::vector<PresetJob> jobs;
  if (name == "fig-energy") {
    for (const double p_comm : {10.0, 50.0}) {
      PresetJob job;
      job.scenario = base;
      job.scenario.power.p_comm = p_comm;
      job.axis = "lbd_density";
      job.label = "lbd_density@p_comm=" + detail::format_double(p_comm);
      job.grid = linspace(0.05e-6, 2.0e-6, 40);
      job.metrics = {CoverageMetric::Energy};
      jobs.push_back(std::move(job));
    }
  } else if (name == "fig-snr") {
    for (const double beta_db : {40.0, 50.0, 60.0}) {
      PresetJob job;
      job.scenario = base;
      job.scenario.snr_threshold_beta = snr_threshold_from_db(beta_db);
      job.axis = "lbd_density";
      job.label = "lbd_density@beta_db=" + detail::format_double(beta_db);
      job.grid = linspace(0.05e-6, 2.0e-6, 40);
      job.metrics = {CoverageMetric::Snr};
      jobs.push_back(std::move(job));
    }
  } else if (name == "fig-joint-beta") {
    PresetJob job;
    job.scenario = base;
    job.scenario.channel.split_delta_s = 1e-6;
    job.axis = "beta_db";
    job.label = "beta_db";
    job.grid = linspace(30.0, 65.0, 36);
    job.metrics = {CoverageMetric::Joint};
    jobs.push_back(std::move(job));
  } else if (name == "fig-joint-delta") {
    PresetJob job;
    job.scenario = base;
    job.scenario.snr_threshold_beta = snr_threshold_from_db(55.0);
    job.axis = "delta_s";
    job.label = "delta_s";
    job.grid = geomspace(1e-9, 0.999, 40);
    job.metrics = {CoverageMetric::Joint};
    jobs.push_back(std::move(job));
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return jobs;
}

}  // namespace lasercov
