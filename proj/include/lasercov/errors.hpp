#pragma once

#include <stdexcept>
#include <string>

namespace lasercov {

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate
/// reached and the remaining error bound so callers can decide whether the
/// partial answer is still usable.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double best_estimate, double residual)
      : std::runtime_error(msg), best_estimate_(best_estimate), residual_(residual) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

/// Scenario/config file problem. Remembers the offending key and, when the
/// problem is tied to a specific line of the file, the 1-based line number.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, std::string key = {}, int line = 0)
      : std::runtime_error(msg), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

/// The scenario cannot reach the requested coverage at any density
/// (e.g. harvested power falls short of consumption even directly overhead).
class UncoverableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracketing / iteration failure in an inverse solver.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lasercov
