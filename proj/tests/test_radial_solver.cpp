#include "liouville/error.hpp"
#include "liouville/radial_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace liouville;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

TEST(Radial, ScalarBubbleProfile) {
  const InteractionMatrix a(Matrix::Constant(1, 1, 1.0));
  const auto prof = integrate(a, HeightVector{Vector::Zero(1)});
  double sup = 0.0;
  for (double r = 0.0; r <= 100.0; r += 0.01) sup = std::max(sup, std::abs(prof.value(0, r) + 2 * std::log1p(r * r / 8)));
  EXPECT_LT(sup, 1e-6);
}

TEST(Radial, ScalarBubbleSummary) {
  const InteractionMatrix a(Matrix::Constant(1, 1, 1.0));
  const auto s = solve_global(a, HeightVector{Vector::Zero(1)});
  EXPECT_NEAR(s.sigma[0], 4.0, 1e-8);
  EXPECT_NEAR(s.m[0], 4.0, 1e-8);
  EXPECT_NEAR(s.D[0], std::log(64.0), 1e-8);
  EXPECT_NEAR(s.m_from_slope[0], 4.0, 1e-8);
}

TEST(Radial, SwapMatrixReducesToScalar) {
  const InteractionMatrix a(mat2(0, 1, 1, 0));
  const auto prof = integrate(a, HeightVector{Vector::Zero(2)});
  for (double r : {0.0, 0.5, 3.0, 40.0}) {
    EXPECT_NEAR(prof.value(0, r), prof.value(1, r), 1e-10);
    EXPECT_NEAR(prof.value(0, r), -2 * std::log1p(r * r / 8), 1e-6);
  }
}

TEST(Radial, HeightShiftIsAScaling) {
  // U(r) solves the system iff U(e^{c/2} r) + c does; shifting alpha by c
  // keeps sigma and moves D by c m / 2.
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const Vector al = vec2(0.0, 0.7);
  const auto p0 = integrate(a, HeightVector{al});
  const auto p1 = integrate(a, HeightVector{(al.array() + 1.0).matrix()});
  for (double r : {0.1, 1.0, 7.0}) {
    EXPECT_NEAR(p1.value(0, std::exp(0.5) * r) + 1.0, p0.value(0, r), 1e-7);
    EXPECT_NEAR(p1.value(1, std::exp(0.5) * r) + 1.0, p0.value(1, r), 1e-7);
  }
  const auto s0 = summarize(a, p0), s1 = summarize(a, p1);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(s1.sigma[i], s0.sigma[i], 1e-8);
    EXPECT_NEAR(s1.D[i], s0.D[i] + 0.5 * s0.m[i], 1e-6);
  }
}

TEST(Radial, ScalarDShiftLaw) {
  const InteractionMatrix a(Matrix::Constant(1, 1, 1.0));
  const auto s = solve_global(a, HeightVector{Vector::Constant(1, 0.8)});
  EXPECT_NEAR(s.D[0], std::log(64.0) + 2 * 0.8, 1e-6);
}

TEST(Radial, MatrixScalingKeepsMasses) {
  // A -> cA maps U to U - log c: sigma scales by 1/c and m is unchanged.
  const Vector al = vec2(0.0, 0.5);
  const auto s1 = solve_global(InteractionMatrix(mat2(1, 2, 2, 1)), HeightVector{al});
  const auto s2 = solve_global(InteractionMatrix(mat2(0.5, 1, 1, 0.5)), HeightVector{al});
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(s2.sigma[i], 2.0 * s1.sigma[i], 1e-7);
    EXPECT_NEAR(s2.m[i], s1.m[i], 1e-8);
  }
}

TEST(Radial, PohozaevOnSeveralSystems) {
  Matrix a3(3, 3);
  a3 << 0.5, 1, 1, 1, 0.5, 1, 1, 1, 0.5;
  struct Case {
    Matrix a;
    Vector alpha;
  };
  const std::vector<Case> cases = {{mat2(1, 2, 2, 1), vec2(0, 0.5)},
                                   {mat2(0.2, 1, 1, 0.8), vec2(0, 1)},
                                   {a3, (Vector(3) << 0, 0.5, 1).finished()}};
  for (const auto& c : cases) {
    const InteractionMatrix a(c.a);
    const auto s = solve_global(a, HeightVector{c.alpha});
    EXPECT_LT(s.pohozaev_defect(), 1e-8);
    EXPECT_LT(s.quadratic_pohozaev_defect(a), 1e-7);
    EXPECT_TRUE(s.satisfies_dichotomy(1e-6));
  }
}

TEST(Radial, NonintegrableHeightsAreReported) {
  EXPECT_THROW(solve_global(InteractionMatrix(mat2(0, 1, 1, 0)), HeightVector{vec2(0, 1)}), NonintegrableError);
}

TEST(Expansion, ConstantAndCorrection) {
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto prof = integrate(a, HeightVector{vec2(0, 0.5)});
  const auto s = summarize(a, prof);
  const auto rep = expansion_residual(a, s, prof, 1e3, 1e5);
  ASSERT_EQ(rep.components.size(), 2u);
  for (const auto& c : rep.components) {
    EXPECT_NEAR(c.fitted_constant, c.expected_constant, 1e-3);
    EXPECT_NEAR(c.correction_measured / c.correction_model, 1.0, 0.05);
  }
}

TEST(Expansion, ScalarAgainstClosedForm) {
  // -2 log(1 + r^2/8) = -4 log r + log 64 - 16/r^2 + O(r^-4)
  const InteractionMatrix a(Matrix::Constant(1, 1, 1.0));
  const auto prof = integrate(a, HeightVector{Vector::Zero(1)});
  const auto s = summarize(a, prof);
  const auto rep = expansion_residual(a, s, prof, 1e3, 1e5);
  EXPECT_LT(rep.components[0].sup_residual, 0.05 * 16.0 / 1e6);
}

TEST(HeightVector, Normalization) {
  const HeightVector h{vec2(1.5, 0.5)};
  EXPECT_FALSE(h.is_normalized());
  const auto n = h.normalized();
  EXPECT_TRUE(n.is_normalized());
  EXPECT_DOUBLE_EQ(n.alpha[0], 1.0);
}
