#pragma once

#include <stdexcept>
#include <string>

namespace momentdet {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A family parameter is outside its valid range (q, p, c, mode).
class InvalidParameter : public Error {
  using Error::Error;
};

/// An evaluated Jacobi coefficient came out non-positive (or non-finite).
class NonPositiveOmega : public Error {
 public:
  explicit NonPositiveOmega(int index, double value = 0.0)
      : Error("omega_" + std::to_string(index) + " = " + std::to_string(value) +
              " is not a positive finite real"),
        index(index),
        value(value) {}
  int index;
  double value;
};

/// Fewer sequence terms are available than an operation needs.
class InsufficientTerms : public Error {
  using Error::Error;
};

/// The moment prefix is not positive definite; `minor_index` is the size of
/// the first failing Hankel minor (equivalently the index of the first
/// recovered omega that is not strictly positive).
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(int minor_index)
      : Error("moment sequence is not positive definite at Hankel minor " +
              std::to_string(minor_index)),
        minor_index(minor_index) {}
  int minor_index;
};

class IndexError : public Error {
  using Error::Error;
};

/// A list of truncation levels mixes even and odd entries.
class ParityMismatch : public Error {
  using Error::Error;
};

/// Iterative solver exceeded its iteration cap.
class ConvergenceFailure : public Error {
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(double achieved, double requested)
      : Error("quadrature error " + std::to_string(achieved) +
              " exceeds requested tolerance " + std::to_string(requested)),
        achieved_error(achieved) {}
  double achieved_error;
};

/// Reference-density moments disagree with the Jacobi-sequence moments.
class MismatchBeyondTolerance : public Error {
 public:
  MismatchBeyondTolerance(int index, double deviation)
      : Error("moment M_" + std::to_string(2 * index) + " deviates by " +
              std::to_string(deviation)),
        index(index) {}
  int index;
};

/// Generic numeric failure (overflow horizons, internal inconsistencies).
class ComputeError : public Error {
  using Error::Error;
};

}  // namespace momentdet
