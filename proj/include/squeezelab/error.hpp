#pragma once

#include <stdexcept>
#include <string>

namespace squeezelab {

/// Argument outside the domain of an operation (bad spin, negative fraction, NaN).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mean spin vanishes so the squeezing parameter is undefined.
class DegenerateMeanSpin : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested parameters lie outside the regime where an expansion holds.
class RegimeViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature or iteration failed to converge.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Problem size exceeds what a brute-force simulation can hold.
class ResourceLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A scan found more than one local minimum.
class OptimizationAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace squeezelab
