#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace tauforge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A parameter is outside the range an operation accepts (negative variance, beta <= 0, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A grid function or test function violates the operation's input contract.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integral did not decay before the truncation limit.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The log-Laplace transform of a measure is infinite on both sides of the origin.
class UnsupportedMeasure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace tauforge
