#include "liouville/weight_function.hpp"

#include "liouville/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace liouville {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double TrigPolynomial::value(const TorusPoint& x) const {
  double v = constant;
  for (const auto& t : terms) {
    const double ph = kTwoPi * (t.k1 * x[0] + t.k2 * x[1]);
    v += t.cos_coef * std::cos(ph) + t.sin_coef * std::sin(ph);
  }
  return v;
}

Eigen::Vector2d TrigPolynomial::gradient(const TorusPoint& x) const {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const auto& t : terms) {
    const double ph = kTwoPi * (t.k1 * x[0] + t.k2 * x[1]);
    const double d = -t.cos_coef * std::sin(ph) + t.sin_coef * std::cos(ph);
    g[0] += kTwoPi * t.k1 * d;
    g[1] += kTwoPi * t.k2 * d;
  }
  return g;
}

double TrigPolynomial::laplacian(const TorusPoint& x) const {
  double v = 0.0;
  for (const auto& t : terms) {
    const double ph = kTwoPi * (t.k1 * x[0] + t.k2 * x[1]);
    v -= kTwoPi * kTwoPi * (t.k1 * t.k1 + t.k2 * t.k2) *
         (t.cos_coef * std::cos(ph) + t.sin_coef * std::sin(ph));
  }
  return v;
}

WeightFunction::WeightFunction(TrigPolynomial p, bool exponential)
    : p_(std::move(p)), exponential_(exponential) {
  if (!std::isfinite(p_.constant)) throw InputError("weight coefficients must be finite");
  for (const auto& t : p_.terms)
    if (!std::isfinite(t.cos_coef) || !std::isfinite(t.sin_coef))
      throw InputError("weight coefficients must be finite");
}

WeightFunction WeightFunction::constant(double c) {
  if (!(c > 0.0)) throw InputError("constant weight must be positive");
  return WeightFunction(TrigPolynomial{c, {}}, false);
}

bool WeightFunction::is_constant() const {
  return std::all_of(p_.terms.begin(), p_.terms.end(), [](const TrigTerm& t) {
    return (t.k1 == 0 && t.k2 == 0) || (t.cos_coef == 0.0 && t.sin_coef == 0.0);
  });
}

double WeightFunction::value(const TorusPoint& x) const {
  const double v = p_.value(x);
  return exponential_ ? std::exp(v) : v;
}

Eigen::Vector2d WeightFunction::gradient(const TorusPoint& x) const {
  if (!exponential_) return p_.gradient(x);
  return std::exp(p_.value(x)) * p_.gradient(x);
}

double WeightFunction::laplacian(const TorusPoint& x) const {
  if (!exponential_) return p_.laplacian(x);
  return std::exp(p_.value(x)) * (p_.laplacian(x) + p_.gradient(x).squaredNorm());
}

WeightFunction WeightFunction::scaled(double c) const {
  if (!(c > 0.0)) throw InputError("scale must be positive");
  TrigPolynomial q = p_;
  if (exponential_) {
    q.constant += std::log(c);
  } else {
    q.constant *= c;
    for (auto& t : q.terms) {
      t.cos_coef *= c;
      t.sin_coef *= c;
    }
  }
  return WeightFunction(q, exponential_);
}

WeightFunction::Bounds WeightFunction::grid_bounds(int M) const {
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double v = value(TorusPoint(double(i) / M, double(j) / M));
      b.min = std::min(b.min, v);
      b.max = std::max(b.max, v);
    }
  return b;
}

bool WeightFunction::within(double C, int M) const {
  const Bounds b = grid_bounds(M);
  return b.min >= 1.0 / C && b.max <= C;
}

}  // namespace liouville
