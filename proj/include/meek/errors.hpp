#pragma once

#include <stdexcept>

namespace meek {

// Numeric argument outside the mathematical domain of an operation
// (non-positive compute, negative time, zero KL gap, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The loss difference has no interior maximum: investment growth <= 1
// makes the curve monotone, so no inflection time exists.
class NoInflectionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Configuration validation failure; the message carries the field path
// (e.g. "scenario.rates.g_h: must be > 0").
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input data; the message carries the
// 1-based source line number where applicable.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few or degenerate data points for a fit to be identifiable.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace meek
