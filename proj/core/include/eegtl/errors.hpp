#pragma once

#include <stdexcept>
#include <string>

namespace eegtl {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched matrix/vector dimensions or sequence lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical contract violation: non-symmetric or non-finite input,
/// non-positive-definite spectrum, singular system, zero variance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach its tolerance. Carries the last
/// residual so the caller can report how far off it stopped.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

/// A required input collection is empty (class without samples, empty
/// online alignment reference, no labeled data at all).
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range or inconsistent parameter value.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed on-disk trial set or results file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Pipeline configuration that cannot run (e.g. a target-only stage
/// with zero labeled target trials).
class InfeasibleConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace eegtl
