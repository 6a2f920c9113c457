#pragma once

#include <stdexcept>
#include <string>

namespace deforce {

/// Invalid parameters or inputs that violate an operation's preconditions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its target (quadrature did not
/// converge, a tail integral diverges, an integrand became non-finite).
/// Carries the best estimate available at the point of failure.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  explicit NumericalError(const std::string& what)
      : NumericalError(what, 0.0, 0.0) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace deforce
