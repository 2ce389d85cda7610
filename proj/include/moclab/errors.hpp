#pragma once

#include <stdexcept>
#include <string>

namespace moclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// c_kappa vanishes too close to the evaluation point (kappa > 0).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Explicit stepping became unstable: range expansion, lost monotonicity or NaN.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Every diffusion coefficient vanishes; no explicit time step can be chosen.
class DegenerateDiffusionError : public Error {
 public:
  using Error::Error;
};

/// Modulus extraction left too many bins without a contributing pair.
class EmptyBinsError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis fails for the supplied data (not a counterexample).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Curves and profiles were sampled at different times.
class TimeMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace moclab
