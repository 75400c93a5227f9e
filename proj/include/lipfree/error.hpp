#pragma once

#include <stdexcept>
#include <string>

namespace lipfree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input shape: wrong matrix dimensions, unknown ids, bad JSON.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of the operation (x == y for a molecule, eps <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold for the given data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Bad command line or experiment configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver stopped before reaching its target accuracy.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_gap) : Error(what), best_gap_(best_gap) {}
  double best_gap() const noexcept { return best_gap_; }

 private:
  double best_gap_;
};

}  // namespace lipfree
