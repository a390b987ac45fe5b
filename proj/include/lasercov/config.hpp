#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "lasercov/errors.hpp"
#include "lasercov/montecarlo.hpp"
#include "lasercov/scenario.hpp"

namespace lasercov {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view value, const std::string& key, int line) {
  const std::string buf(value);
  char* end = nullptr;
  const double parsed = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty() || !std::isfinite(parsed))
    throw ConfigError("config: '" + buf + "' is not a finite number for key '" +
                          key + "'",
                      key, line);
  return parsed;
}

inline std::uint64_t parse_u64(std::string_view value, const std::string& key,
                               int line) {
  const auto raw = trim(value);
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(raw.data(), raw.data() + raw.size(), parsed, 10);
  if (ec != std::errc{} || ptr != raw.data() + raw.size() || raw.empty())
    throw ConfigError("config: '" + std::string(raw) +
                          "' is not an unsigned integer for key '" + key + "'",
                      key, line);
  return parsed;
}

inline Vec3 parse_vec3(std::string_view value, const std::string& key, int line) {
  std::vector<double> parts;
  std::size_t start = 0;
  const std::string buf(value);
  while (start <= buf.size()) {
    const std::size_t comma = buf.find(',', start);
    const std::string_view piece =
        comma == std::string::npos
            ? std::string_view(buf).substr(start)
            : std::string_view(buf).substr(start, comma - start);
    parts.push_back(parse_double(trim(piece), key, line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3)
    throw ConfigError("config: key '" + key + "' expects three comma-separated numbers",
                      key, line);
  return Vec3{parts[0], parts[1], parts[2]};
}

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string format_vec3(const Vec3& v) {
  return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

inline constexpr std::uint64_t fnv1a64(std::string_view data,
                                       std::uint64_t hash = 14695981039346656037ULL) {
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace detail

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[v & 0xf];
    v >>= 4;
  }
  return std::string(buf, 16);
}

inline const char* to_string(TurbulenceModel m) noexcept {
  switch (m) {
    case TurbulenceModel::None: return "none";
    case TurbulenceModel::Tabulated: return "tabulated";
    case TurbulenceModel::LogNormal:
    default: return "lognormal";
  }
}

inline const char* to_string(TurbulenceDistance d) noexcept {
  return d == TurbulenceDistance::Horizontal ? "horizontal" : "slant";
}

inline const char* to_string(PropulsionModel m) noexcept {
  switch (m) {
    case PropulsionModel::FixedWing: return "fixed_wing";
    case PropulsionModel::Rotary: return "rotary";
    case PropulsionModel::FixedDraw:
    default: return "fixed_draw";
  }
}

inline const char* to_string(SamplingMode m) noexcept {
  return m == SamplingMode::DirectNearest ? "direct_nearest" : "window_ppp";
}

/// Content hash of a tabulated fade law, so scenarios carrying different
/// tables fingerprint differently even when loaded from the same path.
inline std::uint64_t table_fingerprint(const TabulatedCdf& table) {
  std::uint64_t hash = 14695981039346656037ULL;
  const auto& h = table.fade_grid();
  const auto& f = table.cdf_grid();
  for (std::size_t i = 0; i < h.size(); ++i) {
    hash = detail::fnv1a64(detail::format_double(h[i]) + "," +
                               detail::format_double(f[i]) + "\n",
                           hash);
  }
  return hash;
}

/// Scenario parameters as canonical (key, value) pairs, in declaration
/// order. This single enumeration backs the fingerprint and the sample
/// config emitted in documentation, so the two can never drift apart.
inline std::vector<std::pair<std::string, std::string>> scenario_entries(
    const Scenario& s) {
  using detail::format_double;
  using detail::format_vec3;
  return {
      {"lbd_density", format_double(s.network.lbd_density)},
      {"altitude", format_double(s.network.altitude)},
      {"p_trans", format_double(s.channel.p_trans)},
      {"aperture_efficiency", format_double(s.channel.aperture_efficiency)},
      {"beam_size", format_double(s.channel.beam_size)},
      {"angular_spread", format_double(s.channel.angular_spread)},
      {"attenuation", format_double(s.channel.attenuation)},
      {"split_delta_s", format_double(s.channel.split_delta_s)},
      {"turbulence_model", to_string(s.turbulence.model)},
      {"turbulence_cn2", format_double(s.turbulence.cn2)},
      {"turbulence_wavenumber", format_double(s.turbulence.wavenumber)},
      {"turbulence_distance", to_string(s.turbulence.distance)},
      {"turbulence_table",
       s.turbulence.table ? "fnv1a:" + to_hex(table_fingerprint(*s.turbulence.table))
                          : "none"},
      {"responsivity", format_double(s.receiver.responsivity)},
      {"wavelength", format_double(s.receiver.wavelength)},
      {"bandwidth", format_double(s.receiver.bandwidth)},
      {"power_model", to_string(s.power.model)},
      {"p_prop", format_double(s.power.p_prop)},
      {"p_comm", format_double(s.power.p_comm)},
      {"fixed_wing_c1", format_double(s.power.fixed_wing.c1)},
      {"fixed_wing_c2", format_double(s.power.fixed_wing.c2)},
      {"fixed_wing_mass", format_double(s.power.fixed_wing.mass)},
      {"fixed_wing_velocity", format_vec3(s.power.fixed_wing.velocity)},
      {"fixed_wing_acceleration", format_vec3(s.power.fixed_wing.acceleration)},
      {"rotary_blade_power", format_double(s.power.rotary.blade_power)},
      {"rotary_induced_power", format_double(s.power.rotary.induced_power)},
      {"rotary_tip_speed", format_double(s.power.rotary.tip_speed)},
      {"rotary_rotor_velocity", format_double(s.power.rotary.rotor_velocity)},
      {"rotary_drag_ratio", format_double(s.power.rotary.drag_ratio)},
      {"rotary_solidity", format_double(s.power.rotary.rotor_solidity)},
      {"rotary_air_density", format_double(s.power.rotary.air_density)},
      {"rotary_rotor_area", format_double(s.power.rotary.rotor_area)},
      {"rotary_speed", format_double(s.power.rotary.speed)},
      {"snr_threshold", format_double(s.snr_threshold_beta)},
  };
}

/// FNV-1a hash of the sorted resolved scenario parameters. Two config files
/// that resolve to the same scenario hash identically regardless of key
/// order, comments, or how defaults were spelled.
inline std::uint64_t scenario_fingerprint(const Scenario& s) {
  auto entries = scenario_entries(s);
  std::vector<std::string> lines;
  lines.reserve(entries.size());
  for (auto& [k, v] : entries) lines.push_back(k + "=" + v);
  std::sort(lines.begin(), lines.end());
  std::uint64_t hash = 14695981039346656037ULL;
  for (const auto& line : lines) {
    for (const char c : line) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 1099511628211ULL;
    }
    hash ^= static_cast<unsigned char>('\n');
    hash *= 1099511628211ULL;
  }
  return hash;
}

struct LoadResult {
  Scenario scenario;
  SimulationConfig simulation;
  std::vector<std::string> notes;
};

namespace detail {

struct ScenarioLoader {
  ScenarioLoader(Scenario& scenario, SimulationConfig& simulation)
      : s(scenario), sim(simulation) {}

  Scenario& s;
  SimulationConfig& sim;
  bool wavenumber_set = false;
  bool wavelength_set = false;
  bool c1_set = false;
  bool cn2_set = false;
  bool snr_linear_set = false;
  bool snr_db_set = false;
  std::string table_path;
  int table_line = 0;

  template <class Validate>
  void checked(const Validate& validate, const std::string& key, int line) {
    try {
      validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what(), key, line);
    }
  }

  bool apply(const std::string& key, std::string_view value, int line) {
    const auto num = [&] { return parse_double(value, key, line); };
    const auto vec = [&] { return parse_vec3(value, key, line); };

    if (key == "lbd_density") {
      s.network.lbd_density = num();
      checked([&] { s.network.validate(); }, key, line);
    } else if (key == "altitude") {
      s.network.altitude = num();
      checked([&] { s.network.validate(); }, key, line);
    } else if (key == "p_trans") {
      s.channel.p_trans = num();
      checked([&] { s.channel.validate(); }, key, line);
    } else if (key == "aperture_efficiency") {
      s.channel.aperture_efficiency = num();
      checked([&] { s.channel.validate(); }, key, line);
    } else if (key == "beam_size") {
      s.channel.beam_size = num();
      checked([&] { s.channel.validate(); }, key, line);
    } else if (key == "angular_spread") {
      s.channel.angular_spread = num();
      checked([&] { s.channel.validate(); }, key, line);
    } else if (key == "attenuation") {
      s.channel.attenuation = num();
      checked([&] { s.channel.validate(); }, key, line);
    } else if (key == "split_delta_s") {
      s.channel.split_delta_s = num();
      checked([&] { s.channel.validate(); }, key, line);
    } else if (key == "turbulence_model") {
      if (value == "none") s.turbulence.model = TurbulenceModel::None;
      else if (value == "lognormal") s.turbulence.model = TurbulenceModel::LogNormal;
      else if (value == "tabulated") s.turbulence.model = TurbulenceModel::Tabulated;
      else throw ConfigError(
          "config: turbulence_model must be 'none', 'lognormal' or 'tabulated'", key,
          line);
    } else if (key == "turbulence_table") {
      table_path = std::string(value);
      table_line = line;
      if (table_path.empty())
        throw ConfigError("config: turbulence_table needs a csv path", key, line);
    } else if (key == "turbulence_cn2") {
      s.turbulence.cn2 = num();
      cn2_set = true;
      checked([&] { s.turbulence.validate(); }, key, line);
    } else if (key == "turbulence_wavenumber") {
      s.turbulence.wavenumber = num();
      wavenumber_set = true;
      checked([&] { s.turbulence.validate(); }, key, line);
    } else if (key == "turbulence_distance") {
      if (value == "horizontal") s.turbulence.distance = TurbulenceDistance::Horizontal;
      else if (value == "slant") s.turbulence.distance = TurbulenceDistance::Slant;
      else throw ConfigError(
          "config: turbulence_distance must be 'horizontal' or 'slant'", key, line);
    } else if (key == "responsivity") {
      s.receiver.responsivity = num();
      checked([&] { s.receiver.validate(); }, key, line);
    } else if (key == "wavelength") {
      s.receiver.wavelength = num();
      wavelength_set = true;
      checked([&] { s.receiver.validate(); }, key, line);
    } else if (key == "bandwidth") {
      s.receiver.bandwidth = num();
      checked([&] { s.receiver.validate(); }, key, line);
    } else if (key == "power_model") {
      if (value == "fixed_draw") s.power.model = PropulsionModel::FixedDraw;
      else if (value == "fixed_wing") s.power.model = PropulsionModel::FixedWing;
      else if (value == "rotary") s.power.model = PropulsionModel::Rotary;
      else throw ConfigError(
          "config: power_model must be 'fixed_draw', 'fixed_wing' or 'rotary'", key,
          line);
      checked([&] { s.power.validate(); }, key, line);
    } else if (key == "p_prop") {
      s.power.p_prop = num();
      checked([&] { s.power.validate(); }, key, line);
    } else if (key == "p_comm") {
      s.power.p_comm = num();
      checked([&] { s.power.validate(); }, key, line);
    } else if (key == "fixed_wing_c1") {
      s.power.fixed_wing.c1 = num();
      c1_set = true;
      checked([&] { s.power.fixed_wing.validate(); }, key, line);
    } else if (key == "fixed_wing_c2") {
      s.power.fixed_wing.c2 = num();
      checked([&] { s.power.fixed_wing.validate(); }, key, line);
    } else if (key == "fixed_wing_mass") {
      s.power.fixed_wing.mass = num();
      checked([&] { s.power.fixed_wing.validate(); }, key, line);
    } else if (key == "fixed_wing_velocity") {
      s.power.fixed_wing.velocity = vec();
      checked([&] { s.power.fixed_wing.validate(); }, key, line);
    } else if (key == "fixed_wing_acceleration") {
      s.power.fixed_wing.acceleration = vec();
      checked([&] { s.power.fixed_wing.validate(); }, key, line);
    } else if (key == "rotary_blade_power") {
      s.power.rotary.blade_power = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_induced_power") {
      s.power.rotary.induced_power = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_tip_speed") {
      s.power.rotary.tip_speed = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_rotor_velocity") {
      s.power.rotary.rotor_velocity = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_drag_ratio") {
      s.power.rotary.drag_ratio = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_solidity") {
      s.power.rotary.rotor_solidity = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_air_density") {
      s.power.rotary.air_density = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_rotor_area") {
      s.power.rotary.rotor_area = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "rotary_speed") {
      s.power.rotary.speed = num();
      checked([&] { s.power.rotary.validate(); }, key, line);
    } else if (key == "snr_threshold") {
      if (snr_db_set)
        throw ConfigError(
            "config: snr_threshold and snr_threshold_db are mutually exclusive", key,
            line);
      s.snr_threshold_beta = num();
      snr_linear_set = true;
      if (!(s.snr_threshold_beta > 0.0))
        throw ConfigError("config: snr_threshold must be positive", key, line);
    } else if (key == "snr_threshold_db") {
      if (snr_linear_set)
        throw ConfigError(
            "config: snr_threshold and snr_threshold_db are mutually exclusive", key,
            line);
      s.snr_threshold_beta = snr_threshold_from_db(num());
      snr_db_set = true;
    } else if (key == "iterations") {
      sim.iterations = parse_u64(value, key, line);
      checked([&] { sim.validate(); }, key, line);
    } else if (key == "seed") {
      sim.seed = parse_u64(value, key, line);
    } else if (key == "sampling") {
      if (value == "direct_nearest") sim.sampling = SamplingMode::DirectNearest;
      else if (value == "window_ppp") sim.sampling = SamplingMode::WindowPpp;
      else throw ConfigError(
          "config: sampling must be 'direct_nearest' or 'window_ppp'", key, line);
    } else if (key == "window_half_width") {
      sim.window_half_width = num();
      checked([&] { sim.validate(); }, key, line);
    } else if (key == "workers") {
      const std::uint64_t w = parse_u64(value, key, line);
      if (w < 1 || w > 4096)
        throw ConfigError("config: workers must lie in [1, 4096]", key, line);
      sim.workers = static_cast<int>(w);
    } else {
      return false;
    }
    return true;
  }
};

}  // namespace detail

/// Parse a flat `key = value` scenario description ('#' starts a comment).
/// An empty document resolves to the default scenario. Errors carry the
/// offending key and 1-based line number. A relative turbulence_table path
/// is resolved against `base_dir` when one is given.
inline LoadResult parse_scenario_text(std::string_view text,
                                      const std::filesystem::path& base_dir = {}) {
  LoadResult out;
  detail::ScenarioLoader loader(out.scenario, out.simulation);
  std::set<std::string> seen;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config: expected 'key = value', got '" +
                            std::string(line) + "'",
                        std::string(line), line_no);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key", key, line_no);
    if (!seen.insert(key).second)
      throw ConfigError("config: duplicate key '" + key + "'", key, line_no);
    if (!loader.apply(key, value, line_no))
      throw ConfigError("config: unknown key '" + key + "'", key, line_no);
  }

  if (!loader.table_path.empty()) {
    if (out.scenario.turbulence.model != TurbulenceModel::Tabulated)
      throw ConfigError(
          "config: turbulence_table requires turbulence_model = tabulated",
          "turbulence_table", loader.table_line);
    std::filesystem::path p(loader.table_path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    std::ifstream in(p, std::ios::binary);
    if (!in)
      throw ConfigError("config: cannot open turbulence_table '" + p.string() + "'",
                        "turbulence_table", loader.table_line);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      out.scenario.turbulence.table =
          std::make_shared<const TabulatedCdf>(TabulatedCdf::from_csv_text(buf.str()));
    } catch (const ConfigError& e) {
      throw ConfigError("config: in '" + p.string() + "': " + e.what(),
                        "turbulence_table", loader.table_line);
    }
  } else if (out.scenario.turbulence.model == TurbulenceModel::Tabulated) {
    throw ConfigError(
        "config: turbulence_model = tabulated needs turbulence_table = <csv path>",
        "turbulence_table");
  }

  if (!loader.wavenumber_set) {
    out.scenario.turbulence.wavenumber =
        optical_wavenumber(out.scenario.receiver.wavelength);
    if (out.scenario.turbulence.model == TurbulenceModel::LogNormal)
      out.notes.push_back(
          "turbulence_wavenumber defaulted to 2*pi/wavelength = " +
          detail::format_double(out.scenario.turbulence.wavenumber) +
          " rad/m; set turbulence_wavenumber to override");
  }
  if (!loader.c1_set && out.scenario.power.model == PropulsionModel::FixedWing) {
    out.notes.push_back(
        "fixed_wing_c1 defaulted to 9.26e-4 W s^3/m^3, the value consistent "
        "with a 100 W level-flight draw at 30 m/s (a frequently misprinted "
        "constant; 9.26e4 would imply megawatt cruise power)");
  }
  if (!loader.cn2_set &&
      out.scenario.turbulence.model == TurbulenceModel::LogNormal) {
    out.notes.push_back(
        "turbulence_cn2 defaulted to 1e-15 m^(-2/3) (clear-air weak "
        "turbulence, consistent with the documented 0.9-coverage design "
        "density of about 0.52e-6 per m^2)");
  }

  try {
    out.scenario.validate();
    out.simulation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return out;
}

/// Load a scenario file from disk; a missing path is a config error.
/// Relative turbulence_table paths resolve against the file's directory.
inline LoadResult load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.parent_path());
}

}  // namespace lasercov
