#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace groundstate {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or a configuration value was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A mesh or discrete manifold violates a structural invariant.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The potential does not satisfy the sign/average conditions an operation needs.
class InadmissiblePotential : public Error {
 public:
  using Error::Error;
};

/// The scaling function is not strictly increasing where monotonicity is required.
class NonMonotoneScaling : public Error {
 public:
  using Error::Error;
};

/// No sign change of the ground energy could be bracketed.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The iterative eigensolver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_residuals, int iterations)
      : Error(what), best_residuals_(std::move(best_residuals)), iterations_(iterations) {}

  const std::vector<double>& best_residuals() const { return best_residuals_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> best_residuals_;
  int iterations_;
};

}  // namespace groundstate
