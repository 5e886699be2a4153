#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant. `field()` names the offending
/// input using a dotted path (e.g. "pump.w_p") when one is known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string field = {})
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A query point lies outside the paraxial / narrowband regime.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quadrature failed to reach its tolerance, or cannot estimate convergence.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace spdc
