#pragma once

#include <stdexcept>
#include <string>

namespace decolight {

/// Malformed or physically invalid configuration. Carries the location
/// (file:line or key) that triggered it.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine could not reach its requested tolerance, or the
/// integrand produced NaN/Inf.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace decolight
