#pragma once

#include <stdexcept>
#include <string>

namespace raq {

/// Argument outside the mathematical domain of an operation (negative
/// distance, non-positive anchor, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent system configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structurally malformed optimization problem.
class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace raq
