#pragma once

#include <stdexcept>
#include <string>

namespace conicband {

/// Input outside the physical domain of an operation (negative strength, rho <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Any failure of the numerical machinery. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bracketing refinement hit its iteration cap. Carries the last interval.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : NumericalError(what), lo_(lo), hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class BandNotFoundError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// |g1'| vanished at a candidate, so the cone slope is undefined.
class DegenerateSlopeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The local gap is too wide for a linear cone fit over the configured window.
class FitUnreliableError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotConicalPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace conicband
