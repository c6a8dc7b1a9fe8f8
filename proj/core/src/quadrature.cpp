#include "hdivflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hdivflow/errors.hpp"

namespace hdivflow {
namespace {

struct Orbit {
  std::array<double, 3> bary;  // distinct permutations are generated
  double weight;
};

// Dunavant's symmetric rules; all weights are positive at these degrees.
QuadRuleTri from_orbits(std::initializer_list<Orbit> orbits, int degree) {
  QuadRuleTri rule;
  rule.exact_degree = degree;
  for (const auto& o : orbits) {
    auto p = o.bary;
    std::sort(p.begin(), p.end());
    do {
      rule.points.push_back(p);
      rule.weights.push_back(o.weight);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  for (double& w : rule.weights) w /= sum;
  return rule;
}

QuadRuleTri make_triangle_rule(int degree) {
  constexpr double third = 1.0 / 3.0;
  switch (degree) {
    case 1:
      return from_orbits({{{third, third, third}, 1.0}}, 1);
    case 2:
      return from_orbits({{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0}}, 2);
    case 3:
    case 4:
      return from_orbits(
          {{{0.108103018168070, 0.445948490915965, 0.445948490915965}, 0.223381589678011},
           {{0.816847572980459, 0.091576213509771, 0.091576213509771}, 0.109951743655322}},
          4);
    case 5:
      return from_orbits(
          {{{third, third, third}, 0.225},
           {{0.059715871789770, 0.470142064105115, 0.470142064105115}, 0.132394152788506},
           {{0.797426985353087, 0.101286507323456, 0.101286507323456}, 0.125939180544827}},
          5);
    case 6:
      return from_orbits(
          {{{0.501426509658179, 0.249286745170910, 0.249286745170910}, 0.116786275726379},
           {{0.873821971016996, 0.063089014491502, 0.063089014491502}, 0.050844906370207},
           {{0.053145049844817, 0.310352451033784, 0.636502499121399}, 0.082851075618374}},
          6);
    case 7:
    case 8:
      return from_orbits(
          {{{third, third, third}, 0.144315607677787},
           {{0.081414823414554, 0.459292588292723, 0.459292588292723}, 0.095091634267285},
           {{0.658861384496480, 0.170569307751760, 0.170569307751760}, 0.103217370534718},
           {{0.898905543365938, 0.050547228317031, 0.050547228317031}, 0.032458497623198},
           {{0.008394777409958, 0.263112829634638, 0.728492392955404}, 0.027230314174435}},
          8);
    case 9:
      return from_orbits(
          {{{third, third, third}, 0.097135796282799},
           {{0.020634961602525, 0.489682519198738, 0.489682519198738}, 0.031334700227139},
           {{0.125820817014127, 0.437089591492937, 0.437089591492937}, 0.077827541004774},
           {{0.623592928761935, 0.188203535619033, 0.188203535619033}, 0.079647738927210},
           {{0.910540973211095, 0.044729513394453, 0.044729513394453}, 0.025577675658698},
           {{0.036838412054736, 0.221962989160766, 0.741198598784498}, 0.043283539377289}},
          9);
    case 10:
      return from_orbits(
          {{{third, third, third}, 0.090817990382754},
           {{0.028844733232685, 0.485577633383657, 0.485577633383657}, 0.036725957756467},
           {{0.781036849029926, 0.109481575485037, 0.109481575485037}, 0.045321059435528},
           {{0.141707219414880, 0.307939838764121, 0.550352941820999}, 0.072757916845420},
           {{0.025003534762686, 0.246672560639903, 0.728323904597411}, 0.028327242531057},
           {{0.009540815400299, 0.066803251012200, 0.923655933587500}, 0.009421666963733}},
          10);
    default:
      break;
  }
  throw InvalidArgument("triangle quadrature degree " + std::to_string(degree) +
                        " not in [1," + std::to_string(kMaxTriangleDegree) + "]");
}

QuadRule1D make_gauss_legendre(int degree) {
  if (degree < 1 || degree > kMaxEdgeDegree)
    throw InvalidArgument("edge quadrature degree " + std::to_string(degree) + " not in [1," +
                          std::to_string(kMaxEdgeDegree) + "]");
  const int n = (degree + 2) / 2;
  QuadRule1D rule;
  rule.exact_degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration for the i-th root of P_n on [-1,1].
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map to [0,1]; weights on [-1,1] sum to 2.
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRuleTri& triangle_rule(int exact_degree) {
  static const auto rules = [] {
    std::array<QuadRuleTri, kMaxTriangleDegree + 1> r{};
    for (int d = 1; d <= kMaxTriangleDegree; ++d) r[d] = make_triangle_rule(d);
    return r;
  }();
  if (exact_degree < 1 || exact_degree > kMaxTriangleDegree)
    throw InvalidArgument("triangle quadrature degree " + std::to_string(exact_degree) +
                          " not in [1," + std::to_string(kMaxTriangleDegree) + "]");
  return rules[exact_degree];
}

const QuadRule1D& edge_rule(int exact_degree) {
  static const auto rules = [] {
    std::array<QuadRule1D, kMaxEdgeDegree + 1> r{};
    for (int d = 1; d <= kMaxEdgeDegree; ++d) r[d] = make_gauss_legendre(d);
    return r;
  }();
  if (exact_degree < 1 || exact_degree > kMaxEdgeDegree)
    throw InvalidArgument("edge quadrature degree " + std::to_string(exact_degree) + " not in [1," +
                          std::to_string(kMaxEdgeDegree) + "]");
  return rules[exact_degree];
}

QuadratureConfig QuadratureConfig::for_element_degree(int k) {
  return {std::clamp(2 * k + 6, 1, kMaxTriangleDegree), std::clamp(2 * k + 5, 1, kMaxEdgeDegree)};
}

QuadratureConfig QuadratureConfig::elevated(int by) const {
  return {std::clamp(volume_degree + by, 1, kMaxTriangleDegree),
          std::clamp(edge_degree + by, 1, kMaxEdgeDegree)};
}

void QuadratureConfig::validate() const {
  triangle_rule(volume_degree);
  edge_rule(edge_degree);
}

}  // namespace hdivflow
