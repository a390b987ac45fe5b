// Command-line front end: scenario ingestion, analytic and Monte Carlo
// coverage evaluation, parameter sweeps, figure presets, and inverse
// density design. All tabular output is CSV preceded by a provenance
// manifest in comment lines.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lasercov/lasercov.hpp"

namespace {

using namespace lasercov;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string metrics = "energy,snr,joint";
  std::string engine = "analytic";
  std::string axis;
  std::string grid;
  std::string sampling;
  std::string metric = "energy";
  double window_half_width = 0.0;
  double target = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  int workers = 0;
};

// Option handles of whichever subcommand actually parsed, used to tell
// "flag given" from "default value".
struct OptionHandles {
  CLI::Option* seed = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* sampling = nullptr;
  CLI::Option* window = nullptr;
};

LoadResult load_with_notes(const std::string& path) {
  LoadResult lr = path.empty() ? parse_scenario_text("") : load_scenario(path);
  for (const std::string& note : lr.notes) std::cerr << "note: " << note << "\n";
  return lr;
}

std::vector<CoverageMetric> metric_list(const std::string& csv) {
  std::vector<CoverageMetric> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_metric(item));
  }
  if (out.empty()) throw ConfigError("no metrics given", "metrics");
  return out;
}

std::string canonical_metrics(const std::vector<CoverageMetric>& metrics) {
  std::string out;
  for (const CoverageMetric m : metrics) {
    if (!out.empty()) out += ',';
    out += to_string(m);
  }
  return out;
}

// Grid spec: "lin:start:stop:count", "log:start:stop:count", or a
// comma-separated list of values.
std::vector<double> parse_grid(const std::string& spec) {
  auto parse_num = [&](const std::string& tok) {
    return detail::parse_double(tok, "grid", 0);
  };
  if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4)
      throw ConfigError("grid spec must be lin:start:stop:count or "
                        "log:start:stop:count",
                        "grid");
    const double start = parse_num(parts[1]);
    const double stop = parse_num(parts[2]);
    const auto count = detail::parse_u64(parts[3], "grid", 0);
    if (count < 1 || count > 1000000)
      throw ConfigError("grid count must lie in [1, 1e6]", "grid");
    return parts[0] == "lin" ? linspace(start, stop, static_cast<int>(count))
                             : geomspace(start, stop, static_cast<int>(count));
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_num(tok));
  }
  if (out.empty()) throw ConfigError("grid is empty", "grid");
  return out;
}

void apply_sim_overrides(const Options& opt, const OptionHandles& given,
                         SimulationConfig& sim) {
  if (given.seed && given.seed->count() > 0) sim.seed = opt.seed;
  if (given.iterations && given.iterations->count() > 0)
    sim.iterations = opt.iterations;
  if (given.workers && given.workers->count() > 0) sim.workers = opt.workers;
  if (given.sampling && given.sampling->count() > 0) {
    if (opt.sampling == "direct_nearest")
      sim.sampling = SamplingMode::DirectNearest;
    else if (opt.sampling == "window_ppp")
      sim.sampling = SamplingMode::WindowPpp;
    else
      throw ConfigError("sampling must be 'direct_nearest' or 'window_ppp'",
                        "sampling");
  }
  if (given.window && given.window->count() > 0)
    sim.window_half_width = opt.window_half_width;
  sim.validate();
}

std::string mc_command_suffix(const SimulationConfig& sim) {
  std::string out = " --iterations " + std::to_string(sim.iterations) +
                    " --seed " + std::to_string(sim.seed) + " --sampling " +
                    to_string(sim.sampling);
  if (sim.sampling == SamplingMode::WindowPpp)
    out += " --window-half-width " + detail::format_double(sim.window_half_width);
  return out;
}

void emit(const std::string& out_path, const RunManifest& manifest,
          const std::vector<SweepRow>& rows) {
  if (out_path.empty()) {
    write_manifest(std::cout, manifest);
    write_rows_csv(std::cout, rows);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + out_path + "'");
  write_manifest(out, manifest);
  write_rows_csv(out, rows);
}

RunManifest make_manifest(std::string command, std::uint64_t fingerprint,
                          std::optional<std::uint64_t> seed) {
  RunManifest m;
  m.command = std::move(command);
  m.fingerprint = fingerprint;
  m.seed = seed;
  m.timestamp = utc_timestamp();
  return m;
}

void run_analytic(const Options& opt) {
  const LoadResult lr = load_with_notes(opt.config_path);
  const auto metrics = metric_list(opt.metrics);
  std::vector<SweepRow> rows;
  for (const CoverageMetric m : metrics) {
    SweepRow row;
    row.axis = "none";
    row.metric = m;
    row.value = analytic_coverage(lr.scenario, m);
    rows.push_back(std::move(row));
  }
  emit(opt.out_path,
       make_manifest("analytic --metrics " + canonical_metrics(metrics),
                     scenario_fingerprint(lr.scenario), std::nullopt),
       rows);
}

void run_montecarlo(const Options& opt, const OptionHandles& given) {
  LoadResult lr = load_with_notes(opt.config_path);
  apply_sim_overrides(opt, given, lr.simulation);
  const auto metrics = metric_list(opt.metrics);
  std::vector<SweepRow> rows;
  for (const CoverageMetric m : metrics) {
    const CoverageEstimate est = estimate_coverage(lr.scenario, m, lr.simulation);
    SweepRow row;
    row.axis = "none";
    row.metric = m;
    row.montecarlo = true;
    row.value = est.estimate;
    row.std_error = est.std_error;
    row.n_iterations = est.iterations;
    rows.push_back(std::move(row));
  }
  emit(opt.out_path,
       make_manifest("montecarlo --metrics " + canonical_metrics(metrics) +
                         mc_command_suffix(lr.simulation),
                     scenario_fingerprint(lr.scenario), lr.simulation.seed),
       rows);
}

void run_generic_sweep(const Options& opt, const OptionHandles& given) {
  LoadResult lr = load_with_notes(opt.config_path);
  apply_sim_overrides(opt, given, lr.simulation);
  const Engine engine = parse_engine(opt.engine);
  const auto metrics = metric_list(opt.metrics);
  const auto grid = parse_grid(opt.grid);
  const auto rows =
      run_sweep(lr.scenario, opt.axis, grid, metrics, engine, lr.simulation);

  std::string command = "sweep --axis " + opt.axis + " --grid " + opt.grid +
                        " --metrics " + canonical_metrics(metrics) +
                        " --engine " + opt.engine;
  std::optional<std::uint64_t> seed;
  if (engine != Engine::Analytic) {
    command += mc_command_suffix(lr.simulation);
    seed = lr.simulation.seed;
  }
  emit(opt.out_path,
       make_manifest(std::move(command), scenario_fingerprint(lr.scenario), seed),
       rows);
}

void run_density_design(const Options& opt) {
  const LoadResult lr = load_with_notes(opt.config_path);
  const CoverageMetric metric = parse_metric(opt.metric);
  const double density = required_density(lr.scenario, opt.target, metric);
  const double per_10km2 = density * 1e7;

  const RunManifest manifest = make_manifest(
      "density-design --target " + detail::format_double(opt.target) +
          " --metric " + to_string(metric),
      scenario_fingerprint(lr.scenario), std::nullopt);

  std::cerr << "required density: " << detail::format_double(density)
            << " per m^2 (" << detail::format_double(per_10km2)
            << " directors per 10 km^2)\n";

  auto write = [&](std::ostream& os) {
    write_manifest(os, manifest);
    os << "target,metric,density_per_m2,lbds_per_10km2\n";
    os << detail::format_double(opt.target) << ',' << to_string(metric) << ','
       << detail::format_double(density) << ','
       << detail::format_double(per_10km2) << '\n';
  };
  if (opt.out_path.empty()) {
    write(std::cout);
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + opt.out_path + "'");
    write(out);
  }
}

void run_preset(const std::string& name, const Options& opt,
                const OptionHandles& given) {
  LoadResult lr = load_with_notes(opt.config_path);
  apply_sim_overrides(opt, given, lr.simulation);
  const Engine engine = parse_engine(opt.engine);

  std::vector<SweepRow> rows;
  for (const PresetJob& job : preset_jobs(name, lr.scenario)) {
    auto part = run_sweep(job.scenario, job.axis, job.grid, job.metrics, engine,
                          lr.simulation, {}, job.label);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  std::string command = name + " --engine " + opt.engine;
  std::optional<std::uint64_t> seed;
  if (engine != Engine::Analytic) {
    command += mc_command_suffix(lr.simulation);
    seed = lr.simulation.seed;
  }
  emit(opt.out_path,
       make_manifest(std::move(command), scenario_fingerprint(lr.scenario), seed),
       rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Coverage analytics for aerial receivers powered by the nearest laser "
      "beam director of a random ground network"};
  app.set_version_flag("--version", lasercov::kVersion);
  app.require_subcommand(1);

  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path,
                    "Scenario file (key = value lines); defaults apply when omitted");
    sub->add_option("--out", opt.out_path, "Output file (default: standard output)");
  };
  // Each subcommand owns its option objects; return the handles so the
  // callback can ask which flags were actually given.
  auto add_mc = [&](CLI::App* sub) {
    OptionHandles h;
    h.seed = sub->add_option("--seed", opt.seed, "Random seed");
    h.iterations =
        sub->add_option("--iterations", opt.iterations, "Monte Carlo iterations");
    h.workers =
        sub->add_option("--workers", opt.workers, "Worker threads (never affects results)");
    h.sampling = sub->add_option("--sampling", opt.sampling,
                                 "direct_nearest (default) or window_ppp");
    h.window = sub->add_option("--window-half-width", opt.window_half_width,
                               "Window half width in m (window_ppp only)");
    return h;
  };
  auto add_engine = [&](CLI::App* sub) {
    sub->add_option("--engine", opt.engine, "analytic (default), montecarlo, or both");
  };

  CLI::App* analytic = app.add_subcommand(
      "analytic", "Closed-form / quadrature coverage probabilities");
  add_common(analytic);
  analytic->add_option("--metrics", opt.metrics,
                       "Comma list: energy, energy_no_turbulence, snr, joint");
  analytic->callback([&] { run_analytic(opt); });

  CLI::App* montecarlo =
      app.add_subcommand("montecarlo", "Simulated coverage probabilities");
  add_common(montecarlo);
  montecarlo->add_option("--metrics", opt.metrics,
                         "Comma list: energy, energy_no_turbulence, snr, joint");
  const OptionHandles mc_handles = add_mc(montecarlo);
  montecarlo->callback([&, mc_handles] { run_montecarlo(opt, mc_handles); });

  CLI::App* sweep = app.add_subcommand("sweep", "Coverage along one parameter axis");
  add_common(sweep);
  sweep->add_option("--axis", opt.axis, "lbd_density, beta_db, delta_s, or p_comm")
      ->required();
  sweep
      ->add_option("--grid", opt.grid,
                   "lin:start:stop:count, log:start:stop:count, or v1,v2,...")
      ->required();
  sweep->add_option("--metrics", opt.metrics,
                    "Comma list: energy, energy_no_turbulence, snr, joint");
  add_engine(sweep);
  const OptionHandles sweep_handles = add_mc(sweep);
  sweep->callback([&, sweep_handles] { run_generic_sweep(opt, sweep_handles); });

  CLI::App* design = app.add_subcommand(
      "density-design", "Smallest director density reaching a coverage target");
  add_common(design);
  design->add_option("--target", opt.target, "Coverage target in (0, 1)")->required();
  design->add_option("--metric", opt.metric,
                     "energy (default), energy_no_turbulence, snr, or joint");
  design->callback([&] { run_density_design(opt); });

  for (const std::string name :
       {"fig-energy", "fig-snr", "fig-joint-beta", "fig-joint-delta"}) {
    CLI::App* fig = app.add_subcommand(
        name, "Preset sweep reproducing the corresponding reference curve");
    add_common(fig);
    add_engine(fig);
    const OptionHandles fig_handles = add_mc(fig);
    fig->callback([&, name, fig_handles] { run_preset(name, opt, fig_handles); });
  }

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const lasercov::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lasercov::UncoverableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const lasercov::QuadratureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lasercov::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
