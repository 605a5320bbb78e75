#include "liouville/error.hpp"
#include "liouville/leading_terms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Voronoi, SingleAndHalfPeriodCells) {
  const auto one = voronoi_cells({TorusPoint(0.3, 0.8)});
  EXPECT_NEAR(one.cells[0].area(), 1.0, 1e-14);
  EXPECT_NEAR(one.cells[0].inradius(), 0.5, 1e-14);
  const auto two = voronoi_cells({TorusPoint(0.1, 0.1), TorusPoint(0.6, 0.6)});
  for (const auto& c : two.cells) {
    EXPECT_NEAR(c.area(), 0.5, 1e-14);
    EXPECT_NEAR(c.inradius(), std::sqrt(2.0) / 4, 1e-14);
  }
}

TEST(Bracket, SyntheticAnnulusIsExact) {
  const auto cells = voronoi_cells({TorusPoint(0.2, 0.3)});
  const auto& cell = cells.cells[0];
  const double r0 = cell.subtraction_radius();
  const CellDensity annulus{[r0](const Eigen::Vector2d& y) { return y.norm() <= r0 ? 0.0 : -1.0; }, 0.0};
  for (double m : {2.5, 3.0, 3.7})
    for (double d0 : {0.01, 0.05}) EXPECT_NEAR(bracket_for_density(cell, m, d0, annulus), std::pow(r0, 2 - m), 1e-10);
}

TEST(Bracket, PureSingularityOverTheSquareCell) {
  // F = 1 on the whole cell: bracket = delta0^{2-m} - (m-2)/(2 pi) int_{cell \ B} r^{-m},
  // with the cell integral checked against a plain tensor Gauss rule away from the disk.
  const auto cells = voronoi_cells({TorusPoint(0.5, 0.5)});
  const auto& cell = cells.cells[0];
  const double m = 3.0, d0 = 0.05;
  const CellDensity one{[](const Eigen::Vector2d&) { return 0.0; }, 0.0};
  // For m = 3: int_{[-1/2,1/2]^2 \ B(d0)} r^{-3} = 2 pi / d0 - int_{outside square} ... computed via
  // the polar form: 8 int_0^{pi/4} int_{d0}^{1/(2 cos t)} r^{-2} dr dt = 8 (pi/4 / d0 - int_0^{pi/4} 2 cos t dt)
  const double raw = 8 * (kPi / 4 / d0 - 2 * std::sin(kPi / 4));
  EXPECT_NEAR(raw_cell_integral(cell, m, d0, one), raw, 1e-9);
  EXPECT_NEAR(bracket_for_density(cell, m, d0, one), 1 / d0 - (m - 2) / (2 * kPi) * raw, 1e-9);
}

TEST(Bracket, ScalingHLeavesTheBracket) {
  const GreenEvaluator g;
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto s = solve_global(a, HeightVector{(Vector(2) << 0, 0.5).finished()});
  const WeightFunction h(TrigPolynomial{1.0, {{1, 0, 0.3, 0.0}}}, false);
  BlowupConfiguration c{{TorusPoint(0, 0)}, s.m, {h, WeightFunction::constant(1.0)}};
  BlowupConfiguration c2 = c;
  c2.weights = {h.scaled(5.0), WeightFunction::constant(0.2)};
  EXPECT_NEAR(regularized_bracket(c, g, 0, 0, 0.04), regularized_bracket(c2, g, 0, 0, 0.04), 1e-12);
}

TEST(Bracket, DeltaHalvingConverges) {
  const GreenEvaluator g;
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto s = solve_global(a, HeightVector{(Vector(2) << 0, 0.5).finished()});
  BlowupConfiguration c{{TorusPoint(0, 0)}, s.m, {WeightFunction(TrigPolynomial{1.0, {{1, 0, 0.3, 0.0}}}, false), WeightFunction::constant(1.0)}};
  const auto rep = d_total(c, s, g);
  EXPECT_LT(rep.cauchy, 0.01);
  EXPECT_TRUE(std::isfinite(rep.D_total));
  // refining the quadrature moves D by well under 0.5%
  BracketOptions fine;
  fine.order = 30;
  fine.angular_points = 128;
  const auto rep2 = d_total(c, s, g, {0.08, 0.04, 0.02}, 2, fine);
  EXPECT_NEAR(rep2.D_total, rep.D_total, 5e-3 * std::abs(rep.D_total));
  EXPECT_NEAR(rep.lambda_prediction(0.1), 2 * rep.D_total * std::pow(0.1, rep.m - 2), 1e-12 * std::abs(rep.D_total));
}

TEST(Bracket, SymmetricPairSumsTwoCells) {
  const GreenEvaluator g;
  const InteractionMatrix a(mat2(1, 2, 2, 1));
  const auto s = solve_global(a, HeightVector{(Vector(2) << 0, 0.5).finished()});
  const std::vector<WeightFunction> w(2, WeightFunction::constant(1.0));
  BlowupConfiguration pair{{TorusPoint(0, 0), TorusPoint(0.5, 0.5)}, s.m, w};
  const auto rep = d_total(pair, s, g);
  const int i = rep.I1.front();
  EXPECT_NEAR(rep.bracket_limit(i, 0), rep.bracket_limit(i, 1), 1e-8 * std::abs(rep.bracket_limit(i, 0)));
}

TEST(Bracket, RegimeChecks) {
  const GreenEvaluator g;
  const InteractionMatrix one(Matrix::Constant(1, 1, 1.0));
  const auto s = solve_global(one, HeightVector{Vector::Zero(1)});
  BlowupConfiguration c{{TorusPoint(0, 0)}, s.m, {WeightFunction::constant(1.0)}};
  EXPECT_THROW(d_total(c, s, g), RegimeError);
}

TEST(BCoefficient, ScalarOracle) {
  const GreenEvaluator g;
  const InteractionMatrix one(Matrix::Constant(1, 1, 1.0));
  const auto s = solve_global(one, HeightVector{Vector::Zero(1)});
  BlowupConfiguration c{{TorusPoint(0.4, 0.4)}, Vector::Constant(1, 4.0), {WeightFunction::constant(1.0)}};
  const auto rep = b_coefficients(c, s, g);
  EXPECT_NEAR(rep.b(0, 0), 256 * kPi, 1e-6 * 256 * kPi);
  c.weights = {WeightFunction::constant(7.5)};
  EXPECT_EQ(b_coefficients(c, s, g).b(0, 0), rep.b(0, 0));
  EXPECT_NEAR(rep.lambda_prediction(0.01), -4 * rep.b(0, 0) * 1e-4 * std::log(100.0), 1e-9);
}

TEST(BCoefficient, HalfPeriodPair) {
  // gstar_grad vanishes, so b_{1,t} = e^{D} (4 pi N) with N = 2 at both points
  const GreenEvaluator g;
  const InteractionMatrix one(Matrix::Constant(1, 1, 1.0));
  const auto s = solve_global(one, HeightVector{Vector::Zero(1)});
  BlowupConfiguration c{{TorusPoint(0, 0), TorusPoint(0.5, 0.5)}, Vector::Constant(1, 4.0), {WeightFunction::constant(1.0)}};
  const auto rep = b_coefficients(c, s, g);
  EXPECT_NEAR(rep.b(0, 0), 64 * 8 * kPi, 1e-6 * 64 * 8 * kPi);
  EXPECT_NEAR(rep.b(0, 1), rep.b(0, 0), 1e-9 * rep.b(0, 0));
}
