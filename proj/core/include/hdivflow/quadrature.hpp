#pragma once

#include <array>
#include <vector>

namespace hdivflow {

/// Symmetric positive-weight rule on the reference triangle.
/// Points are barycentric triples; weights sum to one, so an integral over a
/// cell T is |T| * sum_q w_q f(x_q).
struct QuadRuleTri {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// Gauss-Legendre rule on [0,1] with weights summing to one.
struct QuadRule1D {
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

inline constexpr int kMaxTriangleDegree = 10;
inline constexpr int kMaxEdgeDegree = 19;

/// Rule exact for all polynomials of total degree <= `exact_degree`
/// (the returned rule may be exact to a higher degree). Degree in [1,10].
const QuadRuleTri& triangle_rule(int exact_degree);

/// Gauss-Legendre rule with ceil((d+1)/2) points. Degree in [1,19].
const QuadRule1D& edge_rule(int exact_degree);

/// Quadrature degrees used for cell and edge integrals.
struct QuadratureConfig {
  int volume_degree = 8;
  int edge_degree = 7;

  /// Defaults for element degree k: volume 2k+6, edge 2k+5.
  static QuadratureConfig for_element_degree(int k);

  /// Both degrees raised by `by`, clamped to the supported range.
  QuadratureConfig elevated(int by) const;

  /// Throws InvalidArgument when either degree is unsupported.
  void validate() const;

  bool operator==(const QuadratureConfig&) const = default;
};

}  // namespace hdivflow
