#include "hdivflow/problems.hpp"

#include <cmath>
#include <numbers>

#include "hdivflow/errors.hpp"
#include "hdivflow/quadrature.hpp"

namespace hdivflow {
namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("sigma must be a positive finite number");
}

VectorField vortex_field(int n) {
  const double k = n * std::numbers::pi;
  return [k](const Vec2& x) {
    const double sx = std::sin(k * x.x()), cx = std::cos(k * x.x());
    const double sy = std::sin(k * x.y()), cy = std::cos(k * x.y());
    return Vec2(k * sx * cy, -k * cx * sy);
  };
}

}  // namespace

double unit_square_mean(const ScalarField& field) {
  constexpr int blocks = 16;
  const auto& rule = edge_rule(kMaxEdgeDegree);
  double sum = 0.0;
  for (int bj = 0; bj < blocks; ++bj) {
    for (int bi = 0; bi < blocks; ++bi) {
      for (std::size_t qi = 0; qi < rule.points.size(); ++qi) {
        for (std::size_t qj = 0; qj < rule.points.size(); ++qj) {
          const Vec2 x((bi + rule.points[qi]) / blocks, (bj + rule.points[qj]) / blocks);
          sum += rule.weights[qi] * rule.weights[qj] * field(x);
        }
      }
    }
  }
  return sum / (blocks * blocks);
}

ProblemSpec vortex_problem(int n, double sigma) {
  if (n < 1) throw InvalidArgument("vortex index n must be positive");
  check_sigma(sigma);
  const double k = n * std::numbers::pi;
  const VectorField beta = vortex_field(n);

  const ScalarField raw_p = [k](const Vec2& x) {
    const double c = std::cos(k * x.x());
    const double s = std::sin(k * x.y());
    return 0.5 * k * k * (c * c - s * s);
  };
  const double shift = unit_square_mean(raw_p);

  ProblemSpec p;
  p.label = "vortex(n=" + std::to_string(n) + ")";
  p.beta = beta;
  p.sigma = [sigma](const Vec2&) { return sigma; };
  p.sigma_min = sigma;
  p.source = [beta, sigma](const Vec2& x) -> Vec2 { return sigma * beta(x); };
  p.exact_u = beta;
  p.exact_p = [raw_p, shift](const Vec2& x) { return raw_p(x) - shift; };
  p.vortex_index = n;
  return p;
}

ShearProfile parse_shear_profile(std::string_view name) {
  if (name == "constant") return ShearProfile::constant;
  if (name == "linear") return ShearProfile::linear;
  if (name == "sine") return ShearProfile::sine;
  throw InvalidArgument("unknown shear profile '" + std::string(name) + "'");
}

std::string_view to_string(ShearProfile profile) {
  switch (profile) {
    case ShearProfile::constant: return "constant";
    case ShearProfile::linear: return "linear";
    case ShearProfile::sine: return "sine";
  }
  return "?";
}

ProblemSpec shear_problem(std::function<double(double)> profile, double sigma,
                          std::string label) {
  if (!profile) throw InvalidArgument("shear profile must be callable");
  check_sigma(sigma);
  const VectorField beta = [profile](const Vec2& x) { return Vec2(profile(x.y()), 0.0); };
  ProblemSpec p;
  p.label = std::move(label);
  p.beta = beta;
  p.sigma = [sigma](const Vec2&) { return sigma; };
  p.sigma_min = sigma;
  p.source = [beta, sigma](const Vec2& x) -> Vec2 { return sigma * beta(x); };
  p.exact_u = beta;
  p.exact_p = [](const Vec2&) { return 0.0; };
  p.periodic_x = true;
  return p;
}

ProblemSpec shear_problem(ShearProfile profile, double sigma) {
  const std::string label = "shear(" + std::string(to_string(profile)) + ")";
  switch (profile) {
    case ShearProfile::constant:
      return shear_problem([](double) { return 1.0; }, sigma, label);
    case ShearProfile::linear:
      return shear_problem([](double y) { return y; }, sigma, label);
    case ShearProfile::sine:
      return shear_problem([](double y) { return std::sin(std::numbers::pi * y); }, sigma, label);
  }
  throw InvalidArgument("unknown shear profile");
}

ProblemSpec reaction_problem(int n, double sigma) {
  if (n < 1) throw InvalidArgument("vortex index n must be positive");
  check_sigma(sigma);
  const VectorField w = vortex_field(n);
  ProblemSpec p;
  p.label = "reaction(n=" + std::to_string(n) + ")";
  p.beta = [](const Vec2&) { return Vec2(0.0, 0.0); };
  p.sigma = [sigma](const Vec2&) { return sigma; };
  p.sigma_min = sigma;
  p.source = [w, sigma](const Vec2& x) -> Vec2 { return sigma * w(x); };
  p.exact_u = w;
  p.exact_p = [](const Vec2&) { return 0.0; };
  return p;
}

}  // namespace hdivflow
