#pragma once

#include "liouville/torus.hpp"

#include <vector>

namespace liouville {

/// a cos(2 pi k.x) + b sin(2 pi k.x)
struct TrigTerm {
  int k1 = 0;
  int k2 = 0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Real trigonometric polynomial on the unit torus with exact derivatives.
struct TrigPolynomial {
  double constant = 0.0;
  std::vector<TrigTerm> terms;

  double value(const TorusPoint& x) const;
  Eigen::Vector2d gradient(const TorusPoint& x) const;
  double laplacian(const TorusPoint& x) const;
};

/// Positive coefficient function h on the torus: either a trigonometric
/// polynomial p, or exp(p) when `exponential` is set.
class WeightFunction {
 public:
  WeightFunction() : WeightFunction(constant(1.0)) {}
  WeightFunction(TrigPolynomial p, bool exponential);

  static WeightFunction constant(double c);

  const TrigPolynomial& polynomial() const { return p_; }
  bool exponential() const { return exponential_; }
  /// True when no term carries a nonzero coefficient.
  bool is_constant() const;

  double value(const TorusPoint& x) const;
  Eigen::Vector2d gradient(const TorusPoint& x) const;
  double laplacian(const TorusPoint& x) const;
  Eigen::Vector2d log_gradient(const TorusPoint& x) const { return gradient(x) / value(x); }

  /// c * h, represented exactly (coefficients scaled, or log c added to the exponent).
  WeightFunction scaled(double c) const;

  struct Bounds {
    double min = 0.0;
    double max = 0.0;
  };
  /// Extremes over the M x M grid of points (i/M, j/M).
  Bounds grid_bounds(int M = 256) const;
  /// 1/C <= h <= C on the grid.
  bool within(double C, int M = 256) const;

 private:
  TrigPolynomial p_;
  bool exponential_ = false;
};

}  // namespace liouville
