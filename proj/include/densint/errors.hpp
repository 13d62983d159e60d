#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace densint {

// Bad user input (argument out of range, malformed config). CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested derivative order exceeds what a parametrization provides.
class CapabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// |gamma'| vanished somewhere it must not.
class DegenerateParametrizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Discrete winding number too far from an integer to decide a side.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Target sits on a quadrature node where the kernel is singular.
class SingularEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interpolation order too low for the requested operator or derivative.
class OrderError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Branch cut or target location incompatible with the contour.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Target on the wrong side for the requested map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// GMRES did not reach tolerance. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history_(std::move(history)) {}

  const std::vector<double>& residual_history() const noexcept {
    return residual_history_;
  }

 private:
  std::vector<double> residual_history_;
};

}  // namespace densint
