#pragma once

#include <stdexcept>
#include <string>

namespace uframe {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerically rank-deficient input (frame construction, whitening, completion).
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation is violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operation not available in the requested dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The queried point is not a vertex of the polytope.
class NotAVertexError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the supported range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to converge within its cap.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace uframe
