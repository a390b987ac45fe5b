#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lasercov/channel.hpp"
#include "lasercov/power.hpp"

namespace lasercov {

inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s

/// Spatial layout: beam directors form a planar Poisson process and the
/// receiver flies at a fixed altitude, served by the nearest director.
struct NetworkParams {
  double lbd_density = 0.52e-6;  // beam directors per m^2
  double altitude = 100.0;       // receiver altitude, m

  void validate() const {
    if (!(lbd_density > 0.0) || !std::isfinite(lbd_density))
      throw std::invalid_argument("network: lbd_density must be positive");
    if (!(altitude > 0.0) || !std::isfinite(altitude))
      throw std::invalid_argument("network: altitude must be positive");
  }
};

/// Shot-noise-limited optical receiver.
struct ReceiverParams {
  double responsivity = 0.5;       // detector quantum efficiency
  double wavelength = 0.785e-6;    // m
  double bandwidth = 1e9;          // Hz

  void validate() const {
    if (!(responsivity > 0.0))
      throw std::invalid_argument("receiver: responsivity must be positive");
    if (!(wavelength > 0.0))
      throw std::invalid_argument("receiver: wavelength must be positive");
    if (!(bandwidth > 0.0))
      throw std::invalid_argument("receiver: bandwidth must be positive");
  }

  double optical_frequency() const { return kSpeedOfLight / wavelength; }

  /// Shot-noise power scale 2 h nu df dividing the detected signal.
  double shot_noise_scale() const {
    return 2.0 * kPlanck * optical_frequency() * bandwidth;
  }
};

inline double snr_threshold_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double snr_threshold_to_db(double beta) { return 10.0 * std::log10(beta); }

/// Complete system description consumed by the coverage analytics and the
/// Monte Carlo estimator. The SNR threshold is stored linearly; dB values
/// exist only at the configuration boundary.
struct Scenario {
  NetworkParams network;
  ChannelParams channel;
  TurbulenceParams turbulence;
  ReceiverParams receiver;
  PowerParams power;
  double snr_threshold_beta = 1e5;  // linear, 50 dB

  void validate() const {
    network.validate();
    channel.validate();
    turbulence.validate();
    receiver.validate();
    power.validate();
    if (!(snr_threshold_beta > 0.0) || !std::isfinite(snr_threshold_beta))
      throw std::invalid_argument("snr_threshold: must be positive and finite");
  }

  /// Instantaneous SNR at the detector given the fade-scaled received power.
  double snr_of_received(double faded_received_power) const {
    return channel.split_delta_s * receiver.responsivity *
           faded_received_power / receiver.shot_noise_scale();
  }

  /// Received power (after fading) needed so the harvested share covers the
  /// total consumed power. Infinite when the whole received power is tapped
  /// for communication.
  double energy_received_threshold() const {
    const double share = 1.0 - channel.split_delta_s;
    if (share <= 0.0) return std::numeric_limits<double>::infinity();
    return power.consumed_power() / share;
  }

  /// Received power (after fading) needed to reach the SNR threshold.
  double snr_received_threshold() const {
    const double tap = channel.split_delta_s * receiver.responsivity;
    if (tap <= 0.0) return std::numeric_limits<double>::infinity();
    return receiver.shot_noise_scale() * snr_threshold_beta / tap;
  }

  /// Ratio of the energy threshold to the SNR threshold on received power.
  /// Above 1 the energy condition is the binding one, so the joint coverage
  /// reduces to the energy coverage; below 1 it reduces to the SNR coverage.
  /// The thresholds cannot both be infinite (the split cannot be 0 and 1 at
  /// once), so the ratio is always well defined, possibly 0 or infinity.
  double energy_to_snr_threshold_ratio() const {
    const double snr_threshold = snr_received_threshold();
    if (std::isinf(snr_threshold)) return 0.0;
    return energy_received_threshold() / snr_threshold;
  }
};

}  // namespace lasercov
