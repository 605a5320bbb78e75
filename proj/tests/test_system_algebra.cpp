#include "liouville/error.hpp"
#include "liouville/system_algebra.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ParameterPoint point(std::initializer_list<double> rho, int level) {
  Vector v(rho.size());
  int i = 0;
  for (double x : rho) v[i++] = x;
  return {v, level};
}

}  // namespace

TEST(Hypotheses, StandardExamples) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto rep = check_hypotheses(a);
  EXPECT_TRUE(rep.h1);
  EXPECT_TRUE(rep.h2);
  EXPECT_TRUE(a.inverse().isApprox(mat2(-1.0 / 3, 2.0 / 3, 2.0 / 3, -1.0 / 3), 1e-14));

  const auto swap = check_hypotheses(mat2(0, 1, 1, 0));
  EXPECT_TRUE(swap.h1 && swap.h2);

  const auto id = check_hypotheses(Matrix::Identity(2, 2));
  EXPECT_FALSE(id.h2);
  EXPECT_FALSE(id.reasons.empty());
}

TEST(Hypotheses, SingularInverseThrows) {
  const InteractionMatrix a(mat2(1, 1, 1, 1));
  EXPECT_FALSE(a.invertible());
  EXPECT_THROW(a.inverse(), SingularMatrixError);
}

TEST(Lambda, ZeroOnGammaExamples) {
  const InteractionMatrix one(Matrix::Constant(1, 1, 1.0));
  EXPECT_NEAR(lambda_full(one, point({8 * kPi}, 1)), 0.0, 1e-13);
  const InteractionMatrix swap(mat2(0, 1, 1, 0));
  EXPECT_NEAR(lambda_full(swap, point({8 * kPi, 8 * kPi}, 1)), 0.0, 1e-13);
}

TEST(Lambda, VanishesFromAboveAtTheOrigin) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  double prev = 1.0;
  for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double v = lambda_full(a, point({s, 2 * s}, 1));
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Lambda, ScalarMatchesClosedForm) {
  // n = 1: Lambda = 4x - x^2 with x = rho / (2 pi N)
  const InteractionMatrix one(Matrix::Constant(1, 1, 1.0));
  for (int level : {1, 2, 3})
    for (double rho : {1.0, 10.0, 30.0, 60.0}) {
      const double x = rho / (2 * kPi * level);
      EXPECT_NEAR(lambda_full(one, point({rho}, level)), 4 * x - x * x, 1e-12);
    }
}

TEST(Classify, ScalarBelowEightPi) {
  const InteractionMatrix one(Matrix::Constant(1, 1, 1.0));
  const auto p = point({8 * kPi - 0.1}, 1);
  const auto rep = classify(one, p, default_gamma_tol(p));
  EXPECT_GT(rep.lambda_I, 0.0);
  EXPECT_EQ(rep.classification, Region::below_gamma);
}

TEST(Classify, QPointIsOnGammaWithNormalTwo) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto q = q_point(a, 2);
  const auto rep = classify(a, q, default_gamma_tol(q));
  EXPECT_EQ(rep.classification, Region::on_gamma);
  EXPECT_NEAR(rep.normal[0], 2.0, 1e-12);
  EXPECT_NEAR(rep.normal[1], 2.0, 1e-12);
}

TEST(Classify, NonpositiveRhoIsAnInputError) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  EXPECT_THROW(classify(a, point({1.0, -1.0}, 1), 1e-9), InputError);
}

TEST(QPoint, Examples) {
  EXPECT_NEAR(q_point(InteractionMatrix(Matrix::Constant(1, 1, 1.0)), 1).rho[0], 8 * kPi, 1e-12);
  const auto q = q_point(InteractionMatrix(mat2(0, 1, 1, 0)), 1);
  EXPECT_NEAR(q.rho[0], 8 * kPi, 1e-12);
  EXPECT_NEAR(q.rho[1], 8 * kPi, 1e-12);
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto q2 = q_point(a, 2);
  EXPECT_NEAR(q2.rho[0], 16 * kPi / 3, 1e-12);
  EXPECT_NEAR(q2.rho[1], 16 * kPi / 3, 1e-12);
  EXPECT_NEAR(lambda_full(a, q2), 0.0, 1e-12);
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree(0, 2), (Rational{1, 1}));
  EXPECT_EQ(degree(0, -7), (Rational{1, 1}));
  EXPECT_EQ(degree(1, 2), (Rational{-1, 1}));
  EXPECT_EQ(degree(2, 2), (Rational{0, 1}));
  EXPECT_EQ(degree(3, 0), (Rational{1, 1}));
  // (1 - chi)(2 - chi)/2 for chi = -1
  EXPECT_EQ(degree(2, -1), (Rational{3, 1}));
  EXPECT_EQ(degree(0, 0).str(), "1");
}

TEST(Subsets, CountAndOrder) {
  const auto s = proper_subsets(3);
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(s.front(), (Subset{0}));
}
