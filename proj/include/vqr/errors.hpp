#pragma once

#include <stdexcept>
#include <string>

namespace vqr {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: shape mismatches, bad weights, malformed options.
/// CLI maps this family to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A structured input (JSON) does not match the expected schema.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A text input (CSV, number, grid expression) could not be parsed.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The requested operation is not defined for the object's state
/// (e.g. finite-difference coefficient recovery on a sampled rank grid).
class CapabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An operation was invoked before its prerequisites were computed.
class StateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The numerical solver could not certify a solution. CLI exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// The problem is too large to assemble or solve safely. CLI exit code 3.
class ResourceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Filesystem / stream failure. CLI exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqr
