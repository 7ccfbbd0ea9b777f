#pragma once

#include <stdexcept>
#include <string>

namespace fracdn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid domain, region, or grid specification.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range (s, p, lambda, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Test-function support not resolved by the grid.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double required_h) : Error(what), required_h_(required_h) {}
  double required_h() const noexcept { return required_h_; }

 private:
  double required_h_;
};

/// A numerical result that is NaN or infinite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The optimizer failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracdn
