#pragma once

#include <stdexcept>
#include <string>

namespace exparc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, unnormalized weights, bad JSON documents.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical operation was asked outside of its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Logarithm (or negative power) requested on a zero eigenvalue.
class SingularSupportError : public DomainError {
 public:
  SingularSupportError(const std::string& what, int index)
      : DomainError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// The reference state is not faithful (its vector is not separating).
class FaithfulnessError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The arc has a kernel with positive weight, so it cannot be inverted or
/// extended beyond its initial point.
class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Derivative of the normalization diverges (boundary with a kernel).
class DivergentDerivativeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Eigensolver failure.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace exparc
