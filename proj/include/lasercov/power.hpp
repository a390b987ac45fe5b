#pragma once

#include <cmath>
#include <stdexcept>

namespace lasercov {

inline constexpr double kGravity = 9.81;  // m/s^2

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline constexpr double dot(const Vec3& a, const Vec3& b) noexcept {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Vec3& v) noexcept { return std::sqrt(dot(v, v)); }

/// Fixed-wing propulsion draw for a steady manoeuvre described by a velocity
/// and acceleration pair: parasite drag cubic in speed, lift-induced drag
/// with a load-factor correction from the centripetal acceleration, and the
/// rate of work against gravity/inertia.
struct FixedWingParams {
  double c1 = 9.26e-4;  // parasite-drag coefficient, W s^3/m^3
  double c2 = 2250.0;   // induced-drag coefficient, W m/s
  double mass = 10.0;   // airframe mass, kg
  Vec3 velocity{30.0, 0.0, 0.0};      // m/s
  Vec3 acceleration{0.0, 0.0, 0.0};   // m/s^2

  void validate() const {
    if (!(c1 > 0.0) || !(c2 > 0.0))
      throw std::invalid_argument("fixed_wing: drag coefficients must be positive");
    if (!(mass > 0.0)) throw std::invalid_argument("fixed_wing: mass must be positive");
    if (!(norm(velocity) > 0.0))
      throw std::invalid_argument("fixed_wing: speed must be positive (model has no hover regime)");
  }

  double power() const {
    const double v2 = dot(velocity, velocity);
    if (!(v2 > 0.0))
      throw std::domain_error("fixed_wing: power is undefined at zero speed");
    const double v = std::sqrt(v2);
    const double a2 = dot(acceleration, acceleration);
    const double av = dot(acceleration, velocity);
    // Squared acceleration component orthogonal to the flight direction.
    const double a_perp2 = a2 - av * av / v2;
    const double drag = c1 * v2 * v +
                        (c2 / v) * (1.0 + a_perp2 / (kGravity * kGravity));
    return std::abs(drag + mass * av);
  }
};

/// Rotary-wing propulsion draw in forward flight: blade profile power rising
/// with advance ratio, induced power falling off as hover-induced velocity
/// over airspeed, and fuselage parasite power cubic in airspeed.
struct RotaryWingParams {
  double blade_power = 80.0;     // profile power in hover, W
  double induced_power = 88.0;   // induced power in hover, W
  double tip_speed = 120.0;      // rotor blade tip speed, m/s
  double rotor_velocity = 4.03;  // mean induced velocity in hover, m/s
  double drag_ratio = 0.6;       // fuselage drag ratio
  double rotor_solidity = 0.05;
  double air_density = 1.225;    // kg/m^3
  double rotor_area = 0.503;     // rotor disc area, m^2
  double speed = 10.0;           // forward airspeed, m/s

  void validate() const {
    if (!(blade_power > 0.0) || !(induced_power > 0.0))
      throw std::invalid_argument("rotary: hover powers must be positive");
    if (!(tip_speed > 0.0)) throw std::invalid_argument("rotary: tip_speed must be positive");
    if (!(rotor_velocity > 0.0))
      throw std::invalid_argument("rotary: rotor_velocity must be positive");
    if (!(drag_ratio > 0.0) || !(rotor_solidity > 0.0))
      throw std::invalid_argument("rotary: drag parameters must be positive");
    if (!(air_density > 0.0) || !(rotor_area > 0.0))
      throw std::invalid_argument("rotary: air_density and rotor_area must be positive");
    if (!(speed > 0.0))
      throw std::invalid_argument("rotary: speed must be positive (induced term assumes forward flight)");
  }

  double power() const {
    if (!(speed > 0.0))
      throw std::domain_error("rotary: power is undefined at zero speed");
    const double v2 = speed * speed;
    const double profile = blade_power * (1.0 + 3.0 * v2 / (tip_speed * tip_speed));
    const double induced = induced_power * rotor_velocity / speed;
    const double parasite = 0.5 * drag_ratio * air_density * rotor_solidity *
                            rotor_area * v2 * speed;
    return profile + induced + parasite;
  }
};

enum class PropulsionModel { FixedDraw, FixedWing, Rotary };

struct PowerParams {
  PropulsionModel model = PropulsionModel::FixedDraw;
  double p_prop = 100.0;  // propulsion draw under FixedDraw, W
  double p_comm = 10.0;   // communication subsystem draw, W
  FixedWingParams fixed_wing;
  RotaryWingParams rotary;

  void validate() const {
    if (!(p_comm >= 0.0)) throw std::invalid_argument("power: p_comm must be non-negative");
    switch (model) {
      case PropulsionModel::FixedDraw:
        if (!(p_prop >= 0.0))
          throw std::invalid_argument("power: p_prop must be non-negative");
        break;
      case PropulsionModel::FixedWing:
        fixed_wing.validate();
        break;
      case PropulsionModel::Rotary:
        rotary.validate();
        break;
    }
  }

  double propulsion_power() const {
    switch (model) {
      case PropulsionModel::FixedWing:
        return fixed_wing.power();
      case PropulsionModel::Rotary:
        return rotary.power();
      case PropulsionModel::FixedDraw:
      default:
        return p_prop;
    }
  }

  /// Total electrical draw the harvested optical power must sustain.
  double consumed_power() const { return propulsion_power() + p_comm; }
};

}  // namespace lasercov
