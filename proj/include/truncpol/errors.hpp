#pragma once

#include <stdexcept>
#include <string>

namespace truncpol {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, nonpositive scale, bad probability.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

class EmptySetError : public Error {
  public:
    using Error::Error;
};

class UnboundedSetError : public Error {
  public:
    using Error::Error;
};

/// The set has empty interior where a full-dimensional set is required.
class DegenerateSetError : public Error {
  public:
    using Error::Error;
};

/// An iterative solver stopped before meeting its tolerance.
class NumericError : public Error {
  public:
    NumericError(std::string const& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Normalizing constant below the smallest representable mass.
class UnderflowError : public Error {
  public:
    UnderflowError(std::string const& what, double log_mass)
        : Error(what + " (log mass " + std::to_string(log_mass) + ")"),
          log_mass_(log_mass) {}

    double log_mass() const noexcept { return log_mass_; }

  private:
    double log_mass_;
};

/// Probability mass of an approximating interval is too small to use.
class LowMassError : public Error {
  public:
    LowMassError(std::string const& what, double log_estimate)
        : Error(what + " (log estimate " + std::to_string(log_estimate) + ")"),
          log_estimate_(log_estimate) {}

    double log_estimate() const noexcept { return log_estimate_; }

  private:
    double log_estimate_;
};

/// Environment state violates the assumptions of the action-set construction.
class InvalidStateError : public Error {
  public:
    using Error::Error;
};

/// An invariant guaranteed by the inputs was found broken at runtime.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

}  // namespace truncpol
