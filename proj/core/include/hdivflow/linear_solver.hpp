#pragma once

#include <memory>

#include <Eigen/SparseCore>

#include "hdivflow/assembly.hpp"

namespace hdivflow {

struct SolverOptions {
  double tolerance = 1e-10;        ///< on ||Ax - b|| / max(||b||, 1e-300)
  int max_refinement_steps = 3;    ///< at least one step is always taken
};

struct SolveReport {
  Eigen::VectorXd solution;
  double relative_residual = 0.0;
  Index fill_in = 0;  ///< nonzeros in the L and U factors
  double elapsed_seconds = 0.0;
  int refinement_steps = 0;
};

/// ||A x - b||_2 / max(||b||_2, 1e-300).
double relative_residual(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs);

/// Sparse LU with partial pivoting and a COLAMD fill-reducing column
/// ordering. One factorisation serves any number of right-hand sides.
class SparseLu {
 public:
  /// Throws SingularSystemError (with the failing column) or InvalidArgument
  /// for a non-square matrix.
  explicit SparseLu(const Eigen::SparseMatrix<double>& matrix);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  /// Solves with iterative refinement; throws ConvergenceFailure when the
  /// residual stays above the tolerance.
  SolveReport solve(const Eigen::VectorXd& rhs, const SolverOptions& options = {}) const;

  Index fill_in() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Factorisation of a SaddleSystem. The mean-value multiplier couples every
/// pressure DOF, and a dense row and column wreck the sparse LU fill. It is
/// eliminated through the constant pressure mode instead: lambda follows from
/// the compatibility condition, the (u, p) block is solved with one pressure
/// DOF pinned, and the constant mode is then added to meet the mean
/// constraint. Refinement and the residual check use the full matrix.
class SaddleLu {
 public:
  /// Throws SingularSystemError (pivot as an index into the full system).
  explicit SaddleLu(const SaddleSystem& system);
  ~SaddleLu();
  SaddleLu(SaddleLu&&) noexcept;
  SaddleLu& operator=(SaddleLu&&) noexcept;

  SolveReport solve(const Eigen::VectorXd& rhs, const SolverOptions& options = {}) const;
  Index fill_in() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveReport solve(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs,
                  const SolverOptions& options = {});

SolveReport solve(const SaddleSystem& system, const SolverOptions& options = {});

}  // namespace hdivflow
