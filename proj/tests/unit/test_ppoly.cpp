#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cslab/error.hpp"
#include "cslab/ppoly.hpp"

using namespace cslab;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const Quadrature q = gauss_legendre(n);
    ASSERT_EQ(q.nodes.size(), n);
    for (std::size_t k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += q.weights[i] * std::pow(q.nodes[i], static_cast<double>(k));
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(k + 1);
      EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Legendre, MatchesClosedForms) {
  for (double u : {-1.0, -0.3, 0.0, 0.45, 1.0}) {
    std::vector<double> p(4);
    legendre_values(u, p);
    EXPECT_DOUBLE_EQ(p[0], 1.0);
    EXPECT_DOUBLE_EQ(p[1], u);
    EXPECT_NEAR(p[2], 0.5 * (3 * u * u - 1), 1e-15);
    EXPECT_NEAR(p[3], 0.5 * (5 * u * u * u - 3 * u), 1e-15);
  }
}

TEST(PiecewisePolynomial, EvaluatesPerPiece) {
  // f = 1 on [0, 0.25), and t-affine on [0.25, 1): c0 + c1 P1(u).
  const PiecewisePolynomial f({0.25}, {{1.0}, {0.5, 0.5}});
  EXPECT_EQ(f.piece_count(), 2u);
  EXPECT_DOUBLE_EQ(f(0.1), 1.0);
  EXPECT_DOUBLE_EQ(f(0.25), 0.0);   // u = -1 at the piece start
  EXPECT_DOUBLE_EQ(f(0.625), 0.5);  // midpoint, u = 0
  EXPECT_EQ(f.piece_at(0.9), 1u);
  EXPECT_EQ(f.max_degree(), 1u);
}

TEST(PiecewisePolynomial, RejectsBadBreakpoints) {
  EXPECT_THROW(PiecewisePolynomial({0.5, 0.5}, {{1.0}, {1.0}, {1.0}}), Error);
  EXPECT_THROW(PiecewisePolynomial({0.0}, {{1.0}, {1.0}}), Error);
  EXPECT_THROW(PiecewisePolynomial({1.0}, {{1.0}, {1.0}}), Error);
  EXPECT_THROW(PiecewisePolynomial({0.5}, {{1.0}}), Error);
}

TEST(L2, NormsAndDistancesMatchHandComputation) {
  // ||2 * 1_[0,1/4)||^2 = 4 * 1/4 = 1.
  const PiecewisePolynomial g({0.25}, {{2.0}, {0.0}});
  EXPECT_NEAR(l2_norm(g), 1.0, 1e-14);
  // f(t) = t on one piece: P0 = 0.5, P1 coefficient 0.5; ||t||^2 = 1/3.
  const PiecewisePolynomial f({}, {{0.5, 0.5}});
  EXPECT_NEAR(l2_norm(f) * l2_norm(f), 1.0 / 3.0, 1e-14);
  // ||t - 2*1_[0,1/4)||^2 = int_0^.25 (t-2)^2 + int_.25^1 t^2.
  const double a = (std::pow(0.25 - 2.0, 3) - std::pow(-2.0, 3)) / 3.0;
  const double b = (1.0 - std::pow(0.25, 3)) / 3.0;
  EXPECT_NEAR(l2_distance(f, g), std::sqrt(a + b), 1e-13);
  EXPECT_NEAR(l2_inner(f, PiecewisePolynomial::constant(1.0)), 0.5, 1e-14);
}

TEST(PiecewisePolynomial, SupNormEstimate) {
  const PiecewisePolynomial f({0.5}, {{0.25}, {-0.75}});
  EXPECT_DOUBLE_EQ(f.sup_norm_estimate(), 0.75);
}
