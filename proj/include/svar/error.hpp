#pragma once

#include <stdexcept>
#include <string>

namespace svar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad parameter, out-of-range index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The sample size is too small for the requested estimator or cumulant order.
class InsufficientSampleSize : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its support cap.
class SupportExplosion : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace svar
