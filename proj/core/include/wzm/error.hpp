#pragma once

#include <stdexcept>
#include <string>

namespace wzm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coordinate lies on an exact basis state (theta in {0, pi/2}, Pi in {0, 1}),
/// where the parabolic coordinate is infinite.
class InfiniteCoordinateError : public Error {
 public:
  using Error::Error;
};

/// Measurement parameters make one outcome a projective step (infinite step size).
class SingularParameterError : public Error {
 public:
  using Error::Error;
};

/// Generic precondition violation on an argument.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Probability mass reached the edges of a truncated grid.
class BoundaryOverflowError : public Error {
 public:
  using Error::Error;
};

/// Requested time step exceeds the explicit stability limit.
class CflError : public Error {
 public:
  using Error::Error;
};

/// Mass or normalization drifted beyond the configured tolerance.
class MassDriftError : public Error {
 public:
  using Error::Error;
};

/// A closed form was requested in a regime where it does not apply.
class RegimeError : public Error {
 public:
  using Error::Error;
};

}  // namespace wzm
