#pragma once

#include <array>
#include <cmath>

#include "hdivflow/types.hpp"

namespace hdivflow {

/// Affine map x = origin + J xhat from the reference triangle onto a cell.
struct CellGeometry {
  Vec2 origin;
  Mat2 jacobian;
  Mat2 inverse;
  double det = 0.0;

  /// Throws GeometryError when |det J| < 1e-14.
  static CellGeometry from_vertices(const std::array<Vec2, 3>& vertices);

  Vec2 map(const Vec2& reference) const { return origin + jacobian * reference; }
  Vec2 pull_back(const Vec2& x) const { return inverse * (x - origin); }
  double area() const { return 0.5 * std::abs(det); }
};

// Contravariant Piola transform v = J vhat / det J and its derivatives.

inline Vec2 piola_value(const CellGeometry& g, const Vec2& reference_value) {
  return g.jacobian * reference_value / g.det;
}

inline double piola_divergence(const CellGeometry& g, double reference_divergence) {
  return reference_divergence / g.det;
}

/// Physical Jacobian dv_a/dx_b from the reference one.
inline Mat2 piola_jacobian(const CellGeometry& g, const Mat2& reference_jacobian) {
  return g.jacobian * reference_jacobian * g.inverse / g.det;
}

/// Inverse transform: the reference field whose Piola image is `value`.
inline Vec2 inverse_piola(const CellGeometry& g, const Vec2& value) {
  return g.det * (g.inverse * value);
}

}  // namespace hdivflow
