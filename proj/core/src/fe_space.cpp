#include "hdivflow/fe_space.hpp"

#include <string>

#include "hdivflow/errors.hpp"

namespace hdivflow {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec, NormalTrace trace)
    : mesh_(std::move(mesh)), spec_(spec), trace_(trace) {
  if (!mesh_) throw InvalidArgument("FeSpace needs a mesh");
  spec_.validate();
  dofs_ = build_dof_map(*mesh_, spec_, trace_);
  basis_ = &ReferenceBasis::get(spec_);
}

DiscreteField::DiscreteField(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coefficients_(Eigen::VectorXd::Zero(space_->size())) {}

DiscreteField::DiscreteField(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != space_->size())
    throw InvalidArgument("coefficient vector has length " +
                          std::to_string(coefficients_.size()) + ", space has " +
                          std::to_string(space_->size()));
}

std::vector<double> DiscreteField::local_coefficients(Index cell) const {
  if (cell < 0 || cell >= space_->mesh().num_cells())
    throw InvalidArgument("cell index " + std::to_string(cell) + " out of range");
  const auto dofs = space_->dofs().dofs(cell);
  const auto signs = space_->dofs().signs(cell);
  std::vector<double> out(dofs.size(), 0.0);
  for (std::size_t i = 0; i < dofs.size(); ++i)
    if (dofs[i] != kNoDof) out[i] = signs[i] * coefficients_[dofs[i]];
  return out;
}

namespace {

void require_vector(const DiscreteField& f) {
  if (!f.space().spec().is_vector())
    throw InvalidArgument("vector evaluation of a scalar field");
}

}  // namespace

std::vector<Vec2> evaluate_vector(const DiscreteField& field, Index cell,
                                  std::span<const Vec2> reference_points) {
  require_vector(field);
  const auto local = field.local_coefficients(cell);
  const auto g = field.space().geometry(cell);
  const auto& basis = field.space().basis();
  std::vector<Vec2> out;
  out.reserve(reference_points.size());
  for (const auto& p : reference_points) {
    Vec2 v = Vec2::Zero();
    for (int i = 0; i < basis.size(); ++i)
      if (local[i] != 0.0) v += local[i] * basis.value(i, p);
    out.push_back(piola_value(g, v));
  }
  return out;
}

std::vector<double> evaluate_divergence(const DiscreteField& field, Index cell,
                                        std::span<const Vec2> reference_points) {
  require_vector(field);
  const auto local = field.local_coefficients(cell);
  const auto g = field.space().geometry(cell);
  const auto& basis = field.space().basis();
  std::vector<double> out;
  out.reserve(reference_points.size());
  for (const auto& p : reference_points) {
    double d = 0.0;
    for (int i = 0; i < basis.size(); ++i) d += local[i] * basis.divergence(i, p);
    out.push_back(piola_divergence(g, d));
  }
  return out;
}

std::vector<double> evaluate_scalar(const DiscreteField& field, Index cell,
                                    std::span<const Vec2> reference_points) {
  if (field.space().spec().is_vector())
    throw InvalidArgument("scalar evaluation of a vector field");
  const auto local = field.local_coefficients(cell);
  const auto& basis = field.space().basis();
  std::vector<double> out;
  out.reserve(reference_points.size());
  for (const auto& p : reference_points) {
    double v = 0.0;
    for (int i = 0; i < basis.size(); ++i) v += local[i] * basis.scalar_value(i, p);
    out.push_back(v);
  }
  return out;
}

void map_cell_basis(const FeSpace& space, Index cell, const CellGeometry& g,
                    const Tabulation& table, CellBasis& out) {
  const auto signs = space.dofs().signs(cell);
  const auto total = static_cast<std::size_t>(table.n_basis) * table.n_points;
  out.n = table.n_basis;
  if (space.spec().is_vector()) {
    out.values.resize(total);
    out.jacobians.resize(total);
    out.divergence.resize(total);
    const Mat2 jac_scaled = g.jacobian / g.det;
    for (int q = 0; q < table.n_points; ++q) {
      for (int i = 0; i < table.n_basis; ++i) {
        const auto k = table.at(q, i);
        const double s = signs[i];
        out.values[k] = s * (jac_scaled * table.values[k]);
        out.jacobians[k] = s * (jac_scaled * table.jacobians[k] * g.inverse);
        out.divergence[k] = s * table.divergence[k] / g.det;
      }
    }
  } else {
    out.scalars.assign(table.scalars.begin(), table.scalars.end());
  }
}

}  // namespace hdivflow
