#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lasercov/errors.hpp"
#include "lasercov/numerics.hpp"
#include "lasercov/rng.hpp"

namespace lasercov {

/// Free-space optical link between a beam director on the ground and an
/// aerial receiver. Power decays with slant distance d through atmospheric
/// absorption exp(-attenuation * d) and beam spreading over a footprint of
/// diameter beam_size + d * angular_spread.
struct ChannelParams {
  double p_trans = 600.0;              // transmit power, W
  double aperture_efficiency = 0.004;  // combined capture fraction at d = 0
  double beam_size = 0.1;              // beam diameter at the transmitter, m
  double angular_spread = 3.4e-5;      // full divergence angle, rad
  double attenuation = 1e-6;           // absorption coefficient, 1/m
  double split_delta_s = 1e-5;         // received-power share tapped for comms

  void validate() const {
    if (!(p_trans > 0.0)) throw std::invalid_argument("channel: p_trans must be positive");
    if (!(aperture_efficiency > 0.0))
      throw std::invalid_argument("channel: aperture_efficiency must be positive");
    if (!(beam_size > 0.0)) throw std::invalid_argument("channel: beam_size must be positive");
    if (!(angular_spread > 0.0))
      throw std::invalid_argument("channel: angular_spread must be positive");
    if (!(attenuation >= 0.0))
      throw std::invalid_argument("channel: attenuation must be non-negative");
    if (!(split_delta_s >= 0.0 && split_delta_s <= 1.0))
      throw std::invalid_argument("channel: split_delta_s must lie in [0, 1]");
  }
};

/// Slant distance between a receiver at the given altitude and a ground node
/// at horizontal distance ground_radius.
inline double path_length(double altitude, double ground_radius) noexcept {
  return std::hypot(altitude, ground_radius);
}

/// Mean optical power collected by the receiver aperture, before any split.
inline double received_power(const ChannelParams& ch, double altitude,
                             double ground_radius) noexcept {
  const double d = path_length(altitude, ground_radius);
  const double footprint = ch.beam_size + d * ch.angular_spread;
  return ch.aperture_efficiency * ch.p_trans * std::exp(-ch.attenuation * d) /
         (footprint * footprint);
}

/// Power routed to the energy harvester: the (1 - split) share of the
/// received power.
inline double harvested_power(const ChannelParams& ch, double altitude,
                              double ground_radius) noexcept {
  return (1.0 - ch.split_delta_s) * received_power(ch, altitude, ground_radius);
}

/// Largest slant distance at which the received power still meets
/// `required_received_power`. May be smaller than any feasible path length
/// (even negative); callers clamp against the altitude. Closed form via the
/// Lambert W function; the attenuation-free limit reduces to a square root.
inline double critical_slant_distance(const ChannelParams& ch,
                                      double required_received_power) {
  if (!(required_received_power > 0.0))
    throw std::invalid_argument("channel: required received power must be positive");
  const double c = ch.aperture_efficiency * ch.p_trans / required_received_power;
  if (ch.attenuation == 0.0)
    return (std::sqrt(c) - ch.beam_size) / ch.angular_spread;
  const double arg = 0.5 * (ch.attenuation / ch.angular_spread) *
                     std::sqrt(c * std::exp(ch.attenuation * ch.beam_size /
                                            ch.angular_spread));
  return (2.0 / ch.attenuation) * lambert_w0(arg) -
         ch.beam_size / ch.angular_spread;
}

/// Largest ground radius whose link still meets `required_received_power`.
/// Empty when even the overhead position falls short, so a non-finite
/// requirement (power split entirely away) is simply never coverable.
inline std::optional<double> critical_ground_radius(const ChannelParams& ch,
                                                    double altitude,
                                                    double required_received_power) {
  if (std::isinf(required_received_power)) return std::nullopt;
  const double d = critical_slant_distance(ch, required_received_power);
  if (d <= altitude) return std::nullopt;
  return std::sqrt(d * d - altitude * altitude);
}

/// Empirical fade distribution given as (fade, CDF) nodes with linear
/// interpolation between them, 0 below the grid and 1 above it. Stands in
/// for fade laws that have no closed form here.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> fades, std::vector<double> probs)
      : fades_(std::move(fades)), probs_(std::move(probs)) {
    if (fades_.size() != probs_.size() || fades_.size() < 2)
      throw std::invalid_argument("tabulated cdf: need at least two (fade, cdf) rows");
    for (std::size_t i = 0; i < fades_.size(); ++i) {
      if (!std::isfinite(fades_[i]) || fades_[i] < 0.0)
        throw std::invalid_argument("tabulated cdf: fades must be finite and non-negative");
      if (!(probs_[i] >= 0.0 && probs_[i] <= 1.0))
        throw std::invalid_argument("tabulated cdf: cdf values must lie in [0, 1]");
      if (i > 0 && !(fades_[i - 1] < fades_[i]))
        throw std::invalid_argument("tabulated cdf: fades must be strictly increasing");
      if (i > 0 && probs_[i] < probs_[i - 1])
        throw std::invalid_argument("tabulated cdf: cdf values must be nondecreasing");
    }
  }

  /// Parse "fade,cdf" rows. The first nonempty line is a header and is
  /// skipped unconditionally.
  static TabulatedCdf from_csv_text(std::string_view text) {
    std::vector<double> fades, probs;
    bool header_skipped = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string line(nl == std::string_view::npos ? text.substr(pos)
                                                    : text.substr(pos, nl - pos));
      ++line_no;
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty()) continue;
      if (!header_skipped) {
        header_skipped = true;
        continue;
      }
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos)
        throw ConfigError("tabulated cdf: expected 'fade,cdf' on line " +
                              std::to_string(line_no),
                          "turbulence_table", line_no);
      char* end = nullptr;
      const std::string left = line.substr(0, comma);
      const std::string right = line.substr(comma + 1);
      const double h = std::strtod(left.c_str(), &end);
      if (end != left.c_str() + left.size())
        throw ConfigError("tabulated cdf: bad fade value on line " +
                              std::to_string(line_no),
                          "turbulence_table", line_no);
      const double f = std::strtod(right.c_str(), &end);
      if (end != right.c_str() + right.size())
        throw ConfigError("tabulated cdf: bad cdf value on line " +
                              std::to_string(line_no),
                          "turbulence_table", line_no);
      fades.push_back(h);
      probs.push_back(f);
    }
    try {
      return TabulatedCdf(std::move(fades), std::move(probs));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("tabulated cdf: ") + e.what(), "turbulence_table");
    }
  }

  double cdf(double h) const noexcept {
    if (h < fades_.front()) return 0.0;
    if (h >= fades_.back()) return 1.0;
    const auto it = std::upper_bound(fades_.begin(), fades_.end(), h);
    const std::size_t i = static_cast<std::size_t>(it - fades_.begin());
    const double t = (h - fades_[i - 1]) / (fades_[i] - fades_[i - 1]);
    return probs_[i - 1] + t * (probs_[i] - probs_[i - 1]);
  }

  /// Inverse transform on the interpolated grid; flat CDF segments map to
  /// their right endpoint.
  double quantile(double u) const noexcept {
    if (u <= probs_.front()) return fades_.front();
    if (u > probs_.back()) return fades_.back();
    const auto it = std::lower_bound(probs_.begin(), probs_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - probs_.begin());
    const double df = probs_[i] - probs_[i - 1];
    if (df <= 0.0) return fades_[i];
    const double t = (u - probs_[i - 1]) / df;
    return fades_[i - 1] + t * (fades_[i] - fades_[i - 1]);
  }

  const std::vector<double>& fade_grid() const noexcept { return fades_; }
  const std::vector<double>& cdf_grid() const noexcept { return probs_; }

 private:
  std::vector<double> fades_;
  std::vector<double> probs_;
};

enum class TurbulenceModel { None, LogNormal, Tabulated };

/// Distance the scintillation strength is computed over: the horizontal
/// ground radius, or the full slant path.
enum class TurbulenceDistance { Horizontal, Slant };

inline constexpr double kDefaultWavelength = 0.785e-6;  // m

inline constexpr double optical_wavenumber(double wavelength) {
  return 2.0 * std::numbers::pi / wavelength;
}

struct TurbulenceParams {
  TurbulenceModel model = TurbulenceModel::LogNormal;
  double cn2 = 1e-15;  // refractive-index structure constant, m^(-2/3)
  double wavenumber = optical_wavenumber(kDefaultWavelength);  // rad/m
  TurbulenceDistance distance = TurbulenceDistance::Horizontal;
  std::shared_ptr<const TabulatedCdf> table;  // Tabulated model only

  void validate() const {
    if (!(cn2 >= 0.0)) throw std::invalid_argument("turbulence: cn2 must be non-negative");
    if (!(wavenumber > 0.0))
      throw std::invalid_argument("turbulence: wavenumber must be positive");
    if (model == TurbulenceModel::Tabulated && !table)
      throw std::invalid_argument(
          "turbulence: tabulated model needs a (fade, cdf) table");
  }
};

/// Log-amplitude variance of weak-turbulence scintillation for a plane wave
/// over the given propagation distance. Undefined at zero distance; the
/// samplers treat that limit as a deterministic unit fade instead.
inline double rytov_log_amplitude_variance(const TurbulenceParams& turb,
                                           double propagation_distance) {
  if (!(propagation_distance > 0.0))
    throw std::domain_error("turbulence: propagation distance must be positive");
  return 0.3 * std::pow(turb.wavenumber, 7.0 / 6.0) * turb.cn2 *
         std::pow(propagation_distance, 11.0 / 6.0);
}

// Below this log-amplitude variance the fade distribution is numerically a
// point mass at 1; treating it as such avoids dividing by sigma ~ 0.
inline constexpr double kDeterministicFadingVariance = 1e-12;

/// Multiplicative turbulence fade on the received power: degenerate (always
/// 1), log-normal with ln h ~ N(-2 sigma2, 4 sigma2) where sigma2 is the
/// log-amplitude variance (unit mean by construction), or an arbitrary
/// tabulated law.
class TurbulenceFading {
 public:
  static TurbulenceFading none() noexcept { return TurbulenceFading(0.0); }

  static TurbulenceFading log_normal(double sigma2) {
    if (!(sigma2 >= 0.0))
      throw std::invalid_argument("turbulence: variance must be non-negative");
    return TurbulenceFading(sigma2);
  }

  static TurbulenceFading tabulated(std::shared_ptr<const TabulatedCdf> table) {
    if (!table)
      throw std::invalid_argument("turbulence: tabulated fading needs a table");
    return TurbulenceFading(std::move(table));
  }

  bool deterministic() const noexcept {
    return !table_ && sigma2_ < kDeterministicFadingVariance;
  }

  double sigma2() const noexcept { return sigma2_; }

  /// P(fade <= h).
  double cdf(double h) const noexcept {
    if (table_) return h <= 0.0 ? 0.0 : table_->cdf(h);
    if (h <= 0.0) return 0.0;
    if (deterministic()) return h >= 1.0 ? 1.0 : 0.0;
    const double sigma = std::sqrt(sigma2_);
    return std_normal_cdf((std::log(h) + 2.0 * sigma2_) / (2.0 * sigma));
  }

  double sample(RandomStream& rng) const {
    if (table_) return table_->quantile(rng.uniform01());
    if (deterministic()) return 1.0;
    const double sigma = std::sqrt(sigma2_);
    return std::exp(2.0 * sigma * rng.normal() - 2.0 * sigma2_);
  }

 private:
  explicit TurbulenceFading(double sigma2) noexcept : sigma2_(sigma2) {}
  explicit TurbulenceFading(std::shared_ptr<const TabulatedCdf> table) noexcept
      : table_(std::move(table)) {}

  double sigma2_ = 0.0;
  std::shared_ptr<const TabulatedCdf> table_;
};

/// Fade distribution of the link serving a receiver at the given altitude
/// and ground radius. The zero-distance limit of the log-normal law is the
/// deterministic unit fade.
inline TurbulenceFading fading_at(const TurbulenceParams& turb, double altitude,
                                  double ground_radius) {
  switch (turb.model) {
    case TurbulenceModel::None:
      return TurbulenceFading::none();
    case TurbulenceModel::Tabulated:
      return TurbulenceFading::tabulated(turb.table);
    case TurbulenceModel::LogNormal:
      break;
  }
  const double dist = turb.distance == TurbulenceDistance::Horizontal
                          ? ground_radius
                          : path_length(altitude, ground_radius);
  if (!(dist > 0.0)) return TurbulenceFading::none();
  return TurbulenceFading::log_normal(rytov_log_amplitude_variance(turb, dist));
}

}  // namespace lasercov
