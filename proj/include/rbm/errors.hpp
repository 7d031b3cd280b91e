#pragma once

#include <stdexcept>
#include <string>

namespace rbm {

/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable tag used in CLI error reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid-argument"; }
};

class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain-error"; }
};

/// A point where a logarithm or determinant of the weight function is singular.
class SingularPoint : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singular-point"; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical-error"; }
};

class InsufficientData : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "insufficient-data"; }
};

}  // namespace rbm
