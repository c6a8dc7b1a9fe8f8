#include "hdivflow/reference_element.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/LU>

#include "hdivflow/errors.hpp"
#include "hdivflow/quadrature.hpp"

namespace hdivflow {

int SpaceSpec::dofs_per_cell_interior() const noexcept {
  switch (family) {
    case Family::RT: return degree * (degree + 1);
    case Family::BDM: return (degree - 1) * (degree + 1);
    case Family::P_disc: return (degree + 1) * (degree + 2) / 2;
  }
  return 0;
}

int SpaceSpec::dofs_per_cell() const noexcept {
  return 3 * dofs_per_edge() + dofs_per_cell_interior();
}

void SpaceSpec::validate() const {
  bool ok = false;
  switch (family) {
    case Family::RT: ok = degree == 0 || degree == 1; break;
    case Family::BDM: ok = degree == 1; break;
    case Family::P_disc: ok = degree == 0 || degree == 1; break;
  }
  if (!ok) throw InvalidArgument("unsupported finite element " + name());
}

std::string SpaceSpec::name() const {
  switch (family) {
    case Family::RT: return "RT" + std::to_string(degree);
    case Family::BDM: return "BDM" + std::to_string(degree);
    case Family::P_disc: return "P" + std::to_string(degree) + "dc";
  }
  return "?";
}

double Poly2::value(const Vec2& p) const {
  const double x = p.x(), y = p.y();
  return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
}

Vec2 Poly2::gradient(const Vec2& p) const {
  const double x = p.x(), y = p.y();
  return {c[1] + 2.0 * c[3] * x + c[4] * y, c[2] + c[4] * x + 2.0 * c[5] * y};
}

double shifted_legendre(int j, double s) {
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t;
  if (j == 0) return p0;
  for (int k = 2; k <= j; ++k) {
    const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

const std::array<Vec2, 3>& reference_vertices() {
  static const std::array<Vec2, 3> v{Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  return v;
}

Vec2 reference_edge_point(int local_edge, double s) {
  const auto& v = reference_vertices();
  const Vec2& a = v[(local_edge + 1) % 3];
  const Vec2& b = v[(local_edge + 2) % 3];
  return a + s * (b - a);
}

Vec2 reference_edge_normal(int local_edge) {
  const auto& v = reference_vertices();
  const Vec2 t = v[(local_edge + 2) % 3] - v[(local_edge + 1) % 3];
  return Vec2(t.y(), -t.x()).normalized();
}

double reference_edge_length(int local_edge) {
  const auto& v = reference_vertices();
  return (v[(local_edge + 2) % 3] - v[(local_edge + 1) % 3]).norm();
}

namespace {

struct VectorPoly {
  Poly2 x, y;
};

Poly2 monomial(int m) {
  Poly2 p;
  p.c[m] = 1.0;
  return p;
}

// Spanning set of the local polynomial space.
std::vector<VectorPoly> spanning_set(const SpaceSpec& spec) {
  std::vector<VectorPoly> out;
  const Poly2 zero{};
  if (spec.family == Family::RT && spec.degree == 0) {
    out.push_back({monomial(0), zero});
    out.push_back({zero, monomial(0)});
    out.push_back({monomial(1), monomial(2)});  // (x, y)
    return out;
  }
  for (int m = 0; m < 3; ++m) out.push_back({monomial(m), zero});
  for (int m = 0; m < 3; ++m) out.push_back({zero, monomial(m)});
  if (spec.family == Family::RT) {
    out.push_back({monomial(3), monomial(4)});  // x (x, y)
    out.push_back({monomial(4), monomial(5)});  // y (x, y)
  }
  return out;
}

// Applies local DOF functional `f` to a vector polynomial.
double apply_functional(const SpaceSpec& spec, int f, const VectorPoly& v) {
  const int per_edge = spec.dofs_per_edge();
  if (f < 3 * per_edge) {
    const int edge = f / per_edge;
    const int j = f % per_edge;
    const Vec2 n = reference_edge_normal(edge);
    const double len = reference_edge_length(edge);
    const auto& rule = edge_rule(7);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const Vec2 p = reference_edge_point(edge, s);
      sum += rule.weights[q] * (v.x.value(p) * n.x() + v.y.value(p) * n.y()) *
             shifted_legendre(j, s);
    }
    return sum * len;
  }
  // Interior moments against constant vectors (RT_1).
  const int component = f - 3 * per_edge;
  const auto& rule = triangle_rule(4);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 p = to_reference(rule.points[q]);
    sum += rule.weights[q] * (component == 0 ? v.x.value(p) : v.y.value(p));
  }
  return 0.5 * sum;
}

}  // namespace

ReferenceBasis::ReferenceBasis(const SpaceSpec& spec) : spec_(spec) {
  spec.validate();
  if (!spec.is_vector()) {
    if (spec.degree == 0) {
      scalar_.push_back(monomial(0));
    } else {
      Poly2 l0;
      l0.c = {1.0, -1.0, -1.0, 0.0, 0.0, 0.0};
      scalar_ = {l0, monomial(1), monomial(2)};
    }
    return;
  }

  const auto span = spanning_set(spec);
  const int n = static_cast<int>(span.size());
  Eigen::MatrixXd dof(n, n);
  for (int f = 0; f < n; ++f)
    for (int m = 0; m < n; ++m) dof(f, m) = apply_functional(spec, f, span[m]);
  const Eigen::MatrixXd coeff = dof.fullPivLu().inverse();

  vx_.resize(n);
  vy_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) {
      for (int c = 0; c < 6; ++c) {
        vx_[i].c[c] += coeff(m, i) * span[m].x.c[c];
        vy_[i].c[c] += coeff(m, i) * span[m].y.c[c];
      }
    }
  }
}

const ReferenceBasis& ReferenceBasis::get(const SpaceSpec& spec) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<ReferenceBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{static_cast<int>(spec.family), spec.degree}];
  if (!slot) slot.reset(new ReferenceBasis(spec));
  return *slot;
}

Vec2 ReferenceBasis::value(int i, const Vec2& p) const {
  return {vx_[i].value(p), vy_[i].value(p)};
}

Mat2 ReferenceBasis::jacobian(int i, const Vec2& p) const {
  Mat2 j;
  j.row(0) = vx_[i].gradient(p).transpose();
  j.row(1) = vy_[i].gradient(p).transpose();
  return j;
}

double ReferenceBasis::divergence(int i, const Vec2& p) const {
  return vx_[i].gradient(p).x() + vy_[i].gradient(p).y();
}

double ReferenceBasis::scalar_value(int i, const Vec2& p) const { return scalar_[i].value(p); }

Vec2 ReferenceBasis::scalar_gradient(int i, const Vec2& p) const {
  return scalar_[i].gradient(p);
}

Eigen::MatrixXd ReferenceBasis::functional_matrix() const {
  const int n = size();
  Eigen::MatrixXd out(n, n);
  if (!spec_.is_vector()) {
    // Nodal (P_1) or mean-value (P_0) functionals.
    for (int f = 0; f < n; ++f) {
      for (int i = 0; i < n; ++i) {
        out(f, i) = spec_.degree == 0 ? scalar_[i].value(Vec2(1.0 / 3.0, 1.0 / 3.0))
                                      : scalar_[i].value(reference_vertices()[f]);
      }
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const VectorPoly v{vx_[i], vy_[i]};
    for (int f = 0; f < n; ++f) out(f, i) = apply_functional(spec_, f, v);
  }
  return out;
}

Tabulation tabulate(const SpaceSpec& spec, std::span<const Vec2> reference_points) {
  const auto& basis = ReferenceBasis::get(spec);
  Tabulation t;
  t.n_basis = basis.size();
  t.n_points = static_cast<int>(reference_points.size());
  const auto total = static_cast<std::size_t>(t.n_basis) * t.n_points;
  if (spec.is_vector()) {
    t.values.resize(total);
    t.jacobians.resize(total);
    t.divergence.resize(total);
  } else {
    t.scalars.resize(total);
    t.gradients.resize(total);
  }
  for (int q = 0; q < t.n_points; ++q) {
    const Vec2& p = reference_points[q];
    for (int i = 0; i < t.n_basis; ++i) {
      const auto k = t.at(q, i);
      if (spec.is_vector()) {
        t.values[k] = basis.value(i, p);
        t.jacobians[k] = basis.jacobian(i, p);
        t.divergence[k] = t.jacobians[k].trace();
      } else {
        t.scalars[k] = basis.scalar_value(i, p);
        t.gradients[k] = basis.scalar_gradient(i, p);
      }
    }
  }
  return t;
}

Tabulation tabulate(const SpaceSpec& spec, std::span<const Barycentric> points) {
  std::vector<Vec2> ref;
  ref.reserve(points.size());
  for (const auto& b : points) ref.push_back(to_reference(b));
  return tabulate(spec, std::span<const Vec2>(ref));
}

}  // namespace hdivflow
