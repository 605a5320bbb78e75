#include "liouville/blowup_geometry.hpp"
#include "liouville/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

Vector four() { return Vector::Constant(1, 4.0); }

}  // namespace

TEST(LocationResidual, SinglePointConstantWeight) {
  const GreenEvaluator g;
  BlowupConfiguration c{{TorusPoint(0.37, 0.11)}, four(), {WeightFunction::constant(1.0)}};
  EXPECT_LT(location_residual(c, g)[0].norm(), 1e-12);
}

TEST(LocationResidual, HalfPeriodPair) {
  const GreenEvaluator g;
  const TorusPoint p(0.13, 0.42);
  BlowupConfiguration c{{p, p + Eigen::Vector2d(0.5, 0.5)}, four(), {WeightFunction::constant(1.0)}};
  for (const auto& r : location_residual(c, g)) EXPECT_LT(r.norm(), 1e-8);
}

TEST(LocationResidual, ClosedFormForExponentialWeight) {
  // h = exp(cos 2 pi x_1): R = grad log h = (-2 pi sin 2 pi x_1, 0)
  const GreenEvaluator g;
  const WeightFunction h(TrigPolynomial{0.0, {{1, 0, 1.0, 0.0}}}, true);
  for (double x1 : {0.0, 0.5, 0.1, 0.3}) {
    BlowupConfiguration c{{TorusPoint(x1, 0.7)}, four(), {h}};
    const auto r = location_residual(c, g)[0];
    EXPECT_NEAR(r[0], -2 * kPi * std::sin(2 * kPi * x1), 1e-12);
    EXPECT_NEAR(r[1], 0.0, 1e-12);
  }
}

TEST(SolveLocations, RecoversHalfPeriodPair) {
  const GreenEvaluator g;
  const auto sol = solve_locations({WeightFunction::constant(1.0)}, four(), {TorusPoint(0.02, -0.01), TorusPoint(0.47, 0.53)}, g);
  const Eigen::Vector2d d = displacement(sol.config.points[1], sol.config.points[0]);
  EXPECT_NEAR(std::abs(d[0]), 0.5, 1e-8);
  EXPECT_NEAR(std::abs(d[1]), 0.5, 1e-8);
  EXPECT_LE(sol.iterations, 10);
  EXPECT_TRUE(sol.gauge_fixed);
}

TEST(SolveLocations, SinglePointGoesToTheCriticalPointOfH) {
  const GreenEvaluator g;
  const WeightFunction h(TrigPolynomial{0.0, {{1, 0, 1.0, 0.0}, {0, 1, 0.5, 0.0}}}, true);
  const auto sol = solve_locations({h}, four(), {TorusPoint(0.45, 0.55)}, g);
  EXPECT_NEAR(torus_distance(sol.config.points[0], TorusPoint(0.5, 0.5)), 0.0, 1e-8);
}

TEST(SolveLocations, CollidingStartIsAMergeError) {
  const GreenEvaluator g;
  EXPECT_THROW(solve_locations({WeightFunction::constant(1.0)}, four(), {TorusPoint(0.2, 0.2), TorusPoint(0.2, 0.2 + 1e-5)}, g),
               MergeError);
}

TEST(Coefficients, HalfPeriodPairIsCompatible) {
  const GreenEvaluator g;
  BlowupConfiguration c{{TorusPoint(0, 0), TorusPoint(0.5, 0.5)}, four(), {WeightFunction::constant(1.0)}};
  const auto rep = coefficient_report(c, g);
  EXPECT_EQ(rep.compatibility_defect, 0.0);
  EXPECT_DOUBLE_EQ(rep.c[0], 1.0);
  EXPECT_DOUBLE_EQ(rep.c[1], 1.0);
}

TEST(Coefficients, ScalingHLeavesC) {
  const GreenEvaluator g;
  const WeightFunction h(TrigPolynomial{1.0, {{1, 0, 0.3, 0.0}}}, false);
  BlowupConfiguration c{{TorusPoint(0.1, 0), TorusPoint(0.55, 0.5)}, four(), {h}};
  BlowupConfiguration c2 = c;
  c2.weights = {h.scaled(2.0)};
  const auto r1 = coefficient_report(c, g), r2 = coefficient_report(c2, g);
  EXPECT_NEAR((r1.c - r2.c).norm(), 0.0, 1e-14);
}

TEST(Configuration, Validation) {
  BlowupConfiguration c{{TorusPoint(0, 0)}, Vector::Constant(1, 2.0), {WeightFunction::constant(1.0)}};
  EXPECT_THROW(c.validate(), ConfigurationError);
  const auto idx = minimal_mass_indices((Vector(3) << 3.0, 3.5, 3.0).finished());
  EXPECT_EQ(idx, (std::vector<int>{0, 2}));
}
