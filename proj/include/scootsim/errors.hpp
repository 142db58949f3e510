#pragma once

#include <stdexcept>
#include <string>

namespace scootsim {

// Invalid configuration values (non-positive time constants, bad rate ratios,
// destabilizing feedback gains, ...). Raised when an object is constructed or
// validated, never in the middle of a run.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid runtime input to an otherwise valid operation (negative measured
// distance, steering at the kinematic singularity, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical blow-up of the integrated state.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scootsim
