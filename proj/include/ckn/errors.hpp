#pragma once

#include <stdexcept>
#include <string>

namespace ckn {

// Invalid parameters or arguments outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Node doubling did not settle before the node cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point outside the chart (charged coordinate <= 0, origin, |y| >= 1).
class ChartError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or incomplete configuration.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ckn
