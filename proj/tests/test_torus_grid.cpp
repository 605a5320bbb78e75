#include "liouville/torus_grid.hpp"
#include "liouville/weight_function.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace liouville;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(TorusGrid, SpectralLaplacianOfTrigModes) {
  TorusGrid g(64);
  const Field u = g.sample([](const TorusPoint& x) { return std::sin(2 * kPi * x[0]) + std::cos(2 * kPi * (3 * x[0] + 2 * x[1])); });
  const Field expect = g.sample([](const TorusPoint& x) {
    return -4 * kPi * kPi * std::sin(2 * kPi * x[0]) - 4 * kPi * kPi * 13 * std::cos(2 * kPi * (3 * x[0] + 2 * x[1]));
  });
  EXPECT_LT((g.laplacian(u) - expect).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(TorusGrid, InverseLaplacianRoundTrip) {
  TorusGrid g(64);
  const Field f = g.sample([](const TorusPoint& x) { return std::exp(std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1])); });
  const Field v = g.inverse_laplacian(f);
  EXPECT_NEAR(v.mean(), 0.0, 1e-14);
  EXPECT_LT((g.laplacian(v) - (f.array() - f.mean()).matrix()).lpNorm<Eigen::Infinity>(), 1e-11);
}

TEST(TorusGrid, ResampleIsExactForBandLimitedFields) {
  TorusGrid g(32);
  auto f = [](const TorusPoint& x) { return std::cos(2 * kPi * (x[0] - 2 * x[1])) + 0.3 * std::sin(2 * kPi * 5 * x[1]); };
  const Field fine = g.resample(g.sample(f), 128);
  TorusGrid g96(128);
  EXPECT_LT((fine - g96.sample(f)).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(TorusGrid, DealiasDropsHighModes) {
  TorusGrid g(64);
  const Field hi = g.sample([](const TorusPoint& x) { return std::cos(2 * kPi * 25 * x[0]); });
  const Field lo = g.sample([](const TorusPoint& x) { return std::cos(2 * kPi * 10 * x[1]); });
  EXPECT_LT(g.dealias(hi).lpNorm<Eigen::Infinity>(), 1e-13);
  EXPECT_LT((g.dealias(lo) - lo).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(TorusGrid, Coefficient) {
  TorusGrid g(32);
  const Field u = g.sample([](const TorusPoint& x) { return 2.0 * std::cos(2 * kPi * (x[0] + 3 * x[1])); });
  EXPECT_NEAR(std::abs(g.coefficient(u, 1, 3)), 1.0, 1e-13);
}

TEST(WeightFunction, DerivativesAgainstDifferences) {
  const TrigPolynomial p{1.0, {{1, 0, 0.3, 0.1}, {1, 2, -0.2, 0.25}}};
  for (bool expo : {false, true}) {
    const WeightFunction w(p, expo);
    const TorusPoint x(0.31, 0.72);
    const double h = 1e-5;
    Eigen::Vector2d fd;
    double lap = -4 * w.value(x);  // five-point stencil with step 100 h
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e[c] = h;
      fd[c] = (w.value(x + e) - w.value(x - e)) / (2 * h);
      lap += w.value(x + 100 * e) + w.value(x - 100 * e);
    }
    lap /= 1e4 * h * h;
    EXPECT_LT((w.gradient(x) - fd).norm(), 1e-7);
    EXPECT_NEAR(w.laplacian(x), lap, 1e-4 * std::abs(w.laplacian(x)) + 1e-5);
  }
}

TEST(WeightFunction, ScalingIsExact) {
  const WeightFunction w(TrigPolynomial{1.0, {{0, 1, 0.5, 0.0}}}, false);
  const WeightFunction e(TrigPolynomial{0.0, {{0, 1, 0.5, 0.0}}}, true);
  const TorusPoint x(0.2, 0.9);
  EXPECT_NEAR(w.scaled(3.0).value(x), 3.0 * w.value(x), 1e-15);
  EXPECT_NEAR(e.scaled(3.0).value(x), 3.0 * e.value(x), 1e-14);
  EXPECT_NEAR((e.scaled(3.0).log_gradient(x) - e.log_gradient(x)).norm(), 0.0, 1e-14);
  EXPECT_TRUE(WeightFunction::constant(2.0).is_constant());
  EXPECT_FALSE(w.is_constant());
  EXPECT_TRUE(w.within(3.0));
  EXPECT_FALSE(w.within(1.5));
}
