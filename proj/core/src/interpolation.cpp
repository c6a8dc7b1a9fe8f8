#include "hdivflow/interpolation.hpp"

#include <Eigen/Cholesky>

#include "hdivflow/errors.hpp"

namespace hdivflow {

DiscreteField rt_interpolate(std::shared_ptr<const FeSpace> space, const VectorField& field,
                             const QuadratureConfig& quad) {
  if (space->spec().family != Family::RT)
    throw InvalidArgument("rt_interpolate needs a Raviart-Thomas space, got " +
                          space->spec().name());
  quad.validate();
  DiscreteField out(space);
  auto& coeffs = out.coefficients();
  const Mesh& mesh = space->mesh();
  const DofMap& dofs = space->dofs();
  const int per_edge = space->spec().dofs_per_edge();

  const auto& erule = edge_rule(quad.edge_degree);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Index cell = mesh.edge_cells(e)[0];
    const int local = mesh.edge_local_index(e)[0];
    const Index first = dofs.dofs(cell)[local * per_edge];
    if (first == kNoDof) continue;
    const auto ends = mesh.edge_endpoints_in_cell(e, cell);
    const Vec2 tangent = ends[1] - ends[0];
    const double length = tangent.norm();
    const Vec2 normal = Vec2(tangent.y(), -tangent.x()) / length;
    for (int j = 0; j < per_edge; ++j) {
      double moment = 0.0;
      for (std::size_t q = 0; q < erule.points.size(); ++q) {
        const double t = erule.points[q];
        moment += erule.weights[q] * field(ends[0] + t * tangent).dot(normal) *
                  shifted_legendre(j, t);
      }
      coeffs[dofs.dofs(cell)[local * per_edge + j]] = moment * length;
    }
  }

  const int interior = space->spec().dofs_per_cell_interior();
  if (interior > 0) {
    const auto& trule = triangle_rule(quad.volume_degree);
    for (Index c = 0; c < mesh.num_cells(); ++c) {
      const auto g = space->geometry(c);
      Vec2 moment = Vec2::Zero();
      for (std::size_t q = 0; q < trule.points.size(); ++q) {
        const Vec2 xhat = to_reference(trule.points[q]);
        moment += trule.weights[q] * inverse_piola(g, field(g.map(xhat)));
      }
      moment *= 0.5;  // reference area
      const auto cell_dofs = dofs.dofs(c);
      for (int a = 0; a < interior; ++a) coeffs[cell_dofs[3 * per_edge + a]] = moment[a];
    }
  }
  return out;
}

DiscreteField l2_project(std::shared_ptr<const FeSpace> space, const ScalarField& field,
                         const QuadratureConfig& quad) {
  if (space->spec().family != Family::P_disc)
    throw InvalidArgument("l2_project needs a discontinuous scalar space, got " +
                          space->spec().name());
  quad.validate();
  DiscreteField out(space);
  const auto& rule = triangle_rule(quad.volume_degree);
  std::vector<Vec2> points;
  for (const auto& b : rule.points) points.push_back(to_reference(b));
  const Tabulation table = tabulate(space->spec(), std::span<const Vec2>(points));
  const int n = table.n_basis;

  // The reference mass matrix is shared by all affine cells up to |T|.
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (int q = 0; q < table.n_points; ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        mass(i, j) += rule.weights[q] * table.scalars[table.at(q, i)] * table.scalars[table.at(q, j)];
  const Eigen::LLT<Eigen::MatrixXd> solver(mass);

  const Mesh& mesh = space->mesh();
  Eigen::VectorXd rhs(n);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = space->geometry(c);
    rhs.setZero();
    for (int q = 0; q < table.n_points; ++q) {
      const double value = field(g.map(points[q]));
      for (int i = 0; i < n; ++i) rhs[i] += rule.weights[q] * value * table.scalars[table.at(q, i)];
    }
    const Eigen::VectorXd local = solver.solve(rhs);
    const auto cell_dofs = space->dofs().dofs(c);
    for (int i = 0; i < n; ++i) out.coefficients()[cell_dofs[i]] = local[i];
  }
  return out;
}

}  // namespace hdivflow
