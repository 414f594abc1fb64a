#pragma once

#include <stdexcept>
#include <string>

namespace fracfem {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range order, mesh size, exponent or similar argument.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its refinement limit.  Carries the last two
/// estimates so callers can judge how far off the result was.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double coarse, double fine)
      : Error(what), coarse_(coarse), fine_(fine) {}
  double coarse_estimate() const noexcept { return coarse_; }
  double fine_estimate() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

/// A one-sided operator was applied to a term anchored on the other side.
class SidednessError : public Error {
 public:
  using Error::Error;
};

/// The image of an operator leaves the truncated-power class
/// (an exponent at or below -1 would be produced).
class RepresentabilityError : public Error {
 public:
  using Error::Error;
};

/// A value or derivative needed at an endpoint does not exist.
class EvaluabilityError : public Error {
 public:
  using Error::Error;
};

/// Point evaluation at the anchor of a negative power.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A product of two terms is not integrable over (0,1).
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

/// LU pivot fell below the relative threshold.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Convergence rate requested from a sequence containing a zero error.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

/// Malformed study configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracfem
