#pragma once

#include <stdexcept>
#include <string>

namespace mubforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was not met (shape, hermiticity, ranges).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Input data (usually from a file) failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// No construction is available for the requested dimension.
class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// The requested computation exceeds the configured resource cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method did not reach its target.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mubforge
