#include "liouville/error.hpp"
#include "liouville/mass_map.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace liouville;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST(MassMap, SymmetricCaseIsTheScalarBubble) {
  const auto s = sigma_of_alpha(InteractionMatrix(mat2(0, 1, 1, 0)), vec1(0.0));
  EXPECT_NEAR(s[0], 4.0, 1e-8);
  EXPECT_NEAR(s[1], 4.0, 1e-8);
}

TEST(MassMap, ScalarHasNoFreeHeights) {
  const auto s = sigma_of_alpha(InteractionMatrix(Matrix::Constant(1, 1, 1.0)), Vector(0));
  ASSERT_EQ(s.size(), 1);
  EXPECT_NEAR(s[0], 4.0, 1e-8);
}

TEST(MassMap, LoweringTheSecondHeightReducesItsMass) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  EXPECT_LT(sigma_of_alpha(a, vec1(0.3))[1], sigma_of_alpha(a, vec1(0.0))[1]);
}

TEST(MassMap, JacobianAgainstPlainDifferences) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const Vector ah = vec1(0.6);
  const auto s = jacobian(a, ah);
  const double h = 1e-4;
  const double fd = (sigma_of_alpha(a, vec1(0.6 + h))[1] - sigma_of_alpha(a, vec1(0.6 - h))[1]) / (2 * h);
  EXPECT_NEAR(s.jacobian(0, 0), fd, 1e-6 * std::abs(fd));
  EXPECT_NEAR(s.det, s.jacobian(0, 0), 1e-15);
}

TEST(MassMap, JacobianStepHalving) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto s1 = jacobian(a, vec1(0.0), 2e-3);
  const auto s2 = jacobian(a, vec1(0.0), 1e-3);
  EXPECT_GT(std::abs(s1.det), 1e-3);
  EXPECT_NEAR(s1.jacobian(0, 0), s2.jacobian(0, 0), 1e-4 * std::abs(s2.jacobian(0, 0)));
}

TEST(MassMap, InversionRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix a3(3, 3);
  a3 << 0.5, 1, 1, 1, 0.5, 1, 1, 1, 0.5;
  const InteractionMatrix a(a3);
  for (int k = 0; k < 3; ++k) {
    const Vector star = (Vector(2) << u(rng), u(rng)).finished();
    const auto inv = invert(a, sigma_of_alpha(a, star), Vector::Zero(2));
    EXPECT_LT((inv.alpha_hat - star).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(MassMap, SymmetricTarget) {
  const auto inv = invert(InteractionMatrix(mat2(1, 2, 2, 1)), Vector::Constant(2, 4.0 / 3.0), vec1(0.4));
  EXPECT_NEAR(inv.alpha_hat[0], 0.0, 1e-8);
}

TEST(MassMap, TargetOffThePohozaevSurface) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  Vector t = sigma_of_alpha(a, vec1(0.5));
  t[1] *= 1.01;
  EXPECT_THROW(invert(a, t, vec1(0.0)), PreconditionError);
}
