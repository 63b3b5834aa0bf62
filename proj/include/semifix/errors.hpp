#pragma once

#include <stdexcept>
#include <string>

namespace semifix {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed dimensions: non-square matrix, carrier mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Requested check mode is unavailable for the given space,
/// e.g. exhaustive sweeps over a continuum carrier.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace semifix
