#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hdivflow/cell_geometry.hpp"
#include "hdivflow/dof_map.hpp"
#include "hdivflow/mesh.hpp"
#include "hdivflow/reference_element.hpp"

namespace hdivflow {

/// A finite element space on a mesh: reference basis plus global numbering.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec,
          NormalTrace trace = NormalTrace::constrained);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  const SpaceSpec& spec() const noexcept { return spec_; }
  const DofMap& dofs() const noexcept { return dofs_; }
  const ReferenceBasis& basis() const noexcept { return *basis_; }
  NormalTrace normal_trace() const noexcept { return trace_; }
  Index size() const noexcept { return dofs_.n_global; }

  CellGeometry geometry(Index cell) const {
    return CellGeometry::from_vertices(mesh_->cell_vertices(cell));
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceSpec spec_;
  NormalTrace trace_;
  DofMap dofs_;
  const ReferenceBasis* basis_;
};

/// Coefficient vector tied to a space.
class DiscreteField {
 public:
  explicit DiscreteField(std::shared_ptr<const FeSpace> space);
  DiscreteField(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coefficients);

  const FeSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const noexcept { return space_; }
  const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  Eigen::VectorXd& coefficients() noexcept { return coefficients_; }

  /// Local expansion coefficients on `cell` with orientation signs applied;
  /// removed DOFs contribute zero.
  std::vector<double> local_coefficients(Index cell) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  Eigen::VectorXd coefficients_;
};

// Pointwise evaluation at reference points of one cell. Vector families are
// Piola mapped; pressure spaces are evaluated by composition with the map.
// Throws InvalidArgument for a bad cell index or a family mismatch.

std::vector<Vec2> evaluate_vector(const DiscreteField& field, Index cell,
                                  std::span<const Vec2> reference_points);
std::vector<double> evaluate_divergence(const DiscreteField& field, Index cell,
                                        std::span<const Vec2> reference_points);
std::vector<double> evaluate_scalar(const DiscreteField& field, Index cell,
                                    std::span<const Vec2> reference_points);

/// Physical values of every local basis function on one cell, including the
/// orientation signs, computed from a reference tabulation.
struct CellBasis {
  int n = 0;
  std::vector<Vec2> values;
  std::vector<Mat2> jacobians;
  std::vector<double> divergence;
  std::vector<double> scalars;

  std::size_t at(int q, int i) const { return static_cast<std::size_t>(q) * n + i; }
};

void map_cell_basis(const FeSpace& space, Index cell, const CellGeometry& geometry,
                    const Tabulation& table, CellBasis& out);

}  // namespace hdivflow
