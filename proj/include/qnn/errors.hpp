#pragma once

#include <stdexcept>
#include <string>

namespace qnn {

/// Bad argument to a pure operation (non-binary bit, arity mismatch, ...).
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Perceptron wiring that cannot be applied (target among inputs, duplicate targets).
class InvalidWiring : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The adiabatic schedule starts too close to the potential to be adiabatic.
class ScheduleTooFast : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Norm drift of the time integrator exceeded its bound.
class IntegratorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unresolvable task id, malformed config file or invalid numeric field.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qnn
