#pragma once

#include <stdexcept>
#include <string>

namespace qdspin {

/// Scenario configuration rejected during schema validation. Carries a JSON
/// pointer to the offending element so CLI diagnostics can name it.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string json_pointer, const std::string& message)
      : std::invalid_argument(json_pointer + ": " + message),
        pointer_(std::move(json_pointer)) {}

  const std::string& json_pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Numerical failure: integrator guard tripped, positivity lost, fit normal
/// equations singular, oracle cross-check out of tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& message)
      : std::runtime_error(message) {}
};

/// Filesystem/stream failure while reading configs or writing outputs.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace qdspin
