#include <cmath>

#include <gtest/gtest.h>

#include <hdivflow/errors.hpp>
#include <hdivflow/quadrature.hpp>

using namespace hdivflow;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// \int_T x^a y^b over the reference triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double integrate(const QuadRuleTri& rule, int a, int b) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    sum += rule.weights[q] * std::pow(rule.points[q][1], a) * std::pow(rule.points[q][2], b);
  return 0.5 * sum;
}

double integrate(const QuadRule1D& rule, int a) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    sum += rule.weights[q] * std::pow(rule.points[q], a);
  return sum;
}

}  // namespace

TEST(Quadrature, TriangleExamples) {
  EXPECT_DOUBLE_EQ(integrate(triangle_rule(1), 0, 0), 0.5);
  EXPECT_NEAR(integrate(triangle_rule(2), 2, 0), 1.0 / 12.0, 1e-14);
  // 4! 4! / 10! = 1/6300
  EXPECT_NEAR(integrate(triangle_rule(8), 4, 4), 1.0 / 6300.0, 1e-13);
}

TEST(Quadrature, TriangleExactnessSweep) {
  for (int d = 1; d <= kMaxTriangleDegree; ++d) {
    const auto& rule = triangle_rule(d);
    EXPECT_GE(rule.exact_degree, d);
    double wsum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      EXPECT_GT(rule.weights[q], 0.0);
      wsum += rule.weights[q];
      double bsum = 0.0;
      for (double b : rule.points[q]) {
        EXPECT_GE(b, 0.0);
        EXPECT_LE(b, 1.0);
        bsum += b;
      }
      EXPECT_NEAR(bsum, 1.0, 1e-14);
    }
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    for (int a = 0; a <= rule.exact_degree; ++a)
      for (int b = 0; a + b <= rule.exact_degree; ++b)
        EXPECT_NEAR(integrate(rule, a, b), monomial_integral(a, b), 1e-13) << d << ' ' << a << ' ' << b;
  }
}

TEST(Quadrature, EdgeExamples) {
  EXPECT_EQ(edge_rule(1).points.size(), 1u);
  EXPECT_DOUBLE_EQ(integrate(edge_rule(1), 1), 0.5);
  EXPECT_EQ(edge_rule(3).points.size(), 2u);
  EXPECT_NEAR(integrate(edge_rule(3), 3), 0.25, 1e-15);
  EXPECT_EQ(edge_rule(9).points.size(), 5u);
  EXPECT_NEAR(integrate(edge_rule(9), 9), 0.1, 1e-14);
}

TEST(Quadrature, EdgeExactnessSweep) {
  for (int d = 1; d <= kMaxEdgeDegree; ++d) {
    const auto& rule = edge_rule(d);
    for (double w : rule.weights) EXPECT_GT(w, 0.0);
    for (int a = 0; a <= rule.exact_degree; ++a)
      EXPECT_NEAR(integrate(rule, a), 1.0 / (a + 1), 1e-13);
  }
}

TEST(Quadrature, UnsupportedDegrees) {
  EXPECT_THROW(triangle_rule(0), InvalidArgument);
  EXPECT_THROW(triangle_rule(11), InvalidArgument);
  EXPECT_THROW(edge_rule(0), InvalidArgument);
  EXPECT_THROW(edge_rule(20), InvalidArgument);
  EXPECT_THROW((QuadratureConfig{12, 3}.validate()), InvalidArgument);
}

TEST(Quadrature, ElementDefaults) {
  EXPECT_EQ(QuadratureConfig::for_element_degree(1), (QuadratureConfig{8, 7}));
  EXPECT_EQ(QuadratureConfig::for_element_degree(0), (QuadratureConfig{6, 5}));
  EXPECT_EQ((QuadratureConfig{9, 18}.elevated(2)), (QuadratureConfig{10, 19}));
}
