#include "hdivflow/cell_geometry.hpp"

#include <cmath>

#include <Eigen/LU>

#include "hdivflow/errors.hpp"

namespace hdivflow {

CellGeometry CellGeometry::from_vertices(const std::array<Vec2, 3>& vertices) {
  CellGeometry g;
  g.origin = vertices[0];
  g.jacobian.col(0) = vertices[1] - vertices[0];
  g.jacobian.col(1) = vertices[2] - vertices[0];
  g.det = g.jacobian.determinant();
  if (!(std::abs(g.det) >= 1e-14)) throw GeometryError("degenerate cell: |det J| < 1e-14");
  g.inverse = g.jacobian.inverse();
  return g;
}

}  // namespace hdivflow
