#pragma once

#include <stdexcept>
#include <string>

#include "hdivflow/types.hpp"

namespace hdivflow {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cell whose affine map is (numerically) degenerate.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The problem data violates an assumption of the discretisation,
/// e.g. a nonzero advective flux through the wall.
class ProblemSetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, Index pivot)
      : std::runtime_error(what), pivot_(pivot) {}

  /// Column of the failed pivot, or -1 when the backend does not report one.
  Index pivot() const noexcept { return pivot_; }

 private:
  Index pivot_;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace hdivflow
