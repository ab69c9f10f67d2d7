#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Invalid argument or malformed input to a library routine.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or solver configuration that fails validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time integration aborted (non-finite state or blow-up guard).
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqg
