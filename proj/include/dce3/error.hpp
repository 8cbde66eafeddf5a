#pragma once

#include <stdexcept>
#include <string>

namespace dce3 {

// Base for every error raised by the library. The CLI maps the concrete
// type onto an exit code (see tools/dce3.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration: wrong couplings for the atom layout,
// incompatible method/frame, malformed config files, unknown presets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Physically invalid parameter values (negative rates, |epsilon| too large, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

// Step-size underflow, positivity loss, and similar integration-quality failures.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace dce3
