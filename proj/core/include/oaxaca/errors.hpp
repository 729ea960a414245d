#pragma once

#include <stdexcept>

namespace oaxaca {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data failed validation against the model specification.
/// Mapped to CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration file. Mapped to CLI exit code 1.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure, e.g. a rank-deficient design or too many degenerate
/// bootstrap replicates. Mapped to CLI exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or stream failure. Mapped to CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace oaxaca
