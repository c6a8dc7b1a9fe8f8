#include "hdivflow/linear_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "hdivflow/errors.hpp"

namespace hdivflow {

namespace {

using Matrix = Eigen::SparseMatrix<double>;
using LU = Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>>;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Factorises `matrix`; on failure the column from Eigen's message is mapped
// through `to_full` and reported.
void factorize(LU& lu, const Matrix& matrix, const std::function<Index(Index)>& to_full) {
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() == Eigen::Success) return;
  const std::string message = lu.lastErrorMessage();
  Index pivot = -1;
  if (const auto at = message.find("AT "); at != std::string::npos) {
    std::istringstream in(message.substr(at + 3));
    if (in >> pivot) pivot = to_full(pivot - 1);  // reported 1-based
  }
  throw SingularSystemError("singular system: " + message, pivot);
}

// Iterative refinement around an approximate inverse `apply`.
SolveReport refine(const Matrix& matrix, const Eigen::VectorXd& rhs, const SolverOptions& options,
                   const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply) {
  if (!(options.tolerance > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (rhs.size() != matrix.rows())
    throw InvalidArgument("right-hand side length does not match the matrix");
  SolveReport report;
  report.solution = apply(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  Eigen::VectorXd residual = rhs - matrix * report.solution;
  report.relative_residual = residual.norm() / scale;
  const int steps = std::max(1, options.max_refinement_steps);
  for (int k = 0; k < steps; ++k) {
    if (k > 0 && report.relative_residual <= options.tolerance) break;
    Eigen::VectorXd candidate = report.solution + apply(residual);
    Eigen::VectorXd candidate_residual = rhs - matrix * candidate;
    const double norm = candidate_residual.norm() / scale;
    ++report.refinement_steps;
    const bool better = norm <= report.relative_residual || !std::isfinite(report.relative_residual);
    if (better) {
      report.solution = std::move(candidate);
      residual = std::move(candidate_residual);
      report.relative_residual = norm;
    } else if (k > 0) {
      break;
    }
  }
  if (!(report.relative_residual <= options.tolerance)) {
    std::ostringstream msg;
    msg << "relative residual " << report.relative_residual << " above tolerance "
        << options.tolerance << " after " << report.refinement_steps << " refinement steps";
    throw ConvergenceFailure(msg.str(), report.relative_residual);
  }
  return report;
}

}  // namespace

double relative_residual(const Matrix& matrix, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs) {
  const Eigen::VectorXd r = rhs - matrix * x;
  return r.norm() / std::max(rhs.norm(), 1e-300);
}

struct SparseLu::Impl {
  Matrix matrix;
  LU lu;
  double factor_seconds = 0.0;
};

SparseLu::SparseLu(const Matrix& matrix) : impl_(std::make_unique<Impl>()) {
  if (matrix.rows() != matrix.cols())
    throw InvalidArgument("linear solve needs a square matrix");
  const auto start = std::chrono::steady_clock::now();
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  factorize(impl_->lu, impl_->matrix, [](Index i) { return i; });
  impl_->factor_seconds = seconds_since(start);
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

Index SparseLu::fill_in() const noexcept {
  return static_cast<Index>(impl_->lu.nnzL() + impl_->lu.nnzU());
}

SolveReport SparseLu::solve(const Eigen::VectorXd& rhs, const SolverOptions& options) const {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report = refine(impl_->matrix, rhs, options,
                              [this](const Eigen::VectorXd& b) -> Eigen::VectorXd {
                                return impl_->lu.solve(b);
                              });
  report.fill_in = fill_in();
  report.elapsed_seconds = impl_->factor_seconds + seconds_since(start);
  return report;
}

struct SaddleLu::Impl {
  Matrix full;
  Matrix reduced;  // (u, p) block without the pinned row and column
  LU lu;
  Index n_u = 0, n_p = 0;
  Index pinned = 0;        // full index of the pinned pressure DOF
  Eigen::VectorXd mode;    // constant pressure mode z = (0, e) over (u, p)
  Eigen::VectorXd border;  // g = (0, c), the multiplier column over (u, p)
  double mode_border = 0.0;  // g.z
  double factor_seconds = 0.0;

  Eigen::VectorXd apply(const Eigen::VectorXd& b) const {
    const Index n = n_u + n_p;
    // lambda from the compatibility condition z.(b - g lambda) = 0.
    const double lambda = mode.dot(b.head(n)) / mode_border;
    Eigen::VectorXd r = b.head(n) - lambda * border;
    Eigen::VectorXd r_red(n - 1);
    r_red << r.head(pinned), r.tail(n - pinned - 1);
    const Eigen::VectorXd y = lu.solve(r_red);
    Eigen::VectorXd x(n + 1);
    x.head(pinned) = y.head(pinned);
    x[pinned] = 0.0;
    x.segment(pinned + 1, n - pinned - 1) = y.tail(n - pinned - 1);
    const double alpha = (b[n] - border.dot(x.head(n))) / mode_border;
    x.head(n) += alpha * mode;
    x[n] = lambda;
    return x;
  }
};

SaddleLu::SaddleLu(const SaddleSystem& system) : impl_(std::make_unique<Impl>()) {
  const auto start = std::chrono::steady_clock::now();
  auto& s = *impl_;
  s.n_u = system.n_u;
  s.n_p = system.n_p;
  const Index n = s.n_u + s.n_p;
  if (system.matrix.rows() != n + 1 || system.matrix.cols() != n + 1)
    throw InvalidArgument("saddle system matrix has the wrong size");
  if (system.pressure_constant.size() != s.n_p || s.n_p == 0)
    throw InvalidArgument("saddle system lacks its constant pressure mode");
  s.full = system.matrix;
  s.full.makeCompressed();

  Index pin_p = 0;
  system.pressure_constant.cwiseAbs().maxCoeff(&pin_p);
  s.pinned = s.n_u + pin_p;
  s.mode = Eigen::VectorXd::Zero(n);
  s.mode.tail(s.n_p) = system.pressure_constant;
  s.border = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> kept;
  kept.reserve(static_cast<std::size_t>(s.full.nonZeros()));
  for (int k = 0; k < s.full.outerSize(); ++k) {
    for (Matrix::InnerIterator it(s.full, k); it; ++it) {
      const Index r = static_cast<Index>(it.row()), c = static_cast<Index>(it.col());
      if (c == n && r < n) s.border[r] = it.value();
      if (r == n || c == n || r == s.pinned || c == s.pinned) continue;
      kept.emplace_back(r < s.pinned ? r : r - 1, c < s.pinned ? c : c - 1, it.value());
    }
  }
  s.mode_border = s.border.dot(s.mode);
  if (!(std::abs(s.mode_border) > 0.0))
    throw SingularSystemError("mean-value constraint is orthogonal to the constant pressure",
                              n);
  s.reduced.resize(n - 1, n - 1);
  s.reduced.setFromTriplets(kept.begin(), kept.end());
  s.reduced.makeCompressed();
  const Index pinned = s.pinned;
  factorize(s.lu, s.reduced, [pinned](Index i) { return i < pinned ? i : i + 1; });
  s.factor_seconds = seconds_since(start);
}

SaddleLu::~SaddleLu() = default;
SaddleLu::SaddleLu(SaddleLu&&) noexcept = default;
SaddleLu& SaddleLu::operator=(SaddleLu&&) noexcept = default;

Index SaddleLu::fill_in() const noexcept {
  return static_cast<Index>(impl_->lu.nnzL() + impl_->lu.nnzU());
}

SolveReport SaddleLu::solve(const Eigen::VectorXd& rhs, const SolverOptions& options) const {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report = refine(impl_->full, rhs, options,
                              [this](const Eigen::VectorXd& b) { return impl_->apply(b); });
  report.fill_in = fill_in();
  report.elapsed_seconds = impl_->factor_seconds + seconds_since(start);
  return report;
}

SolveReport solve(const Matrix& matrix, const Eigen::VectorXd& rhs, const SolverOptions& options) {
  return SparseLu(matrix).solve(rhs, options);
}

SolveReport solve(const SaddleSystem& system, const SolverOptions& options) {
  return SaddleLu(system).solve(system.rhs, options);
}

}  // namespace hdivflow
