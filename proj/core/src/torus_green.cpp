#include "liouville/torus_green.hpp"

#include "liouville/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoincident = 1e-12;

// E1(x) + log x + euler_gamma, entire in x.
double ein(double x) {
  if (x < 1.0) {
    double term = x, sum = x;
    for (int k = 2; k < 60; ++k) {
      term *= -x / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return -std::expint(-x) + std::log(x) + std::numbers::egamma;
}

double e1(double x) { return -std::expint(-x); }

}  // namespace

GreenEvaluator::GreenEvaluator(GreenMode mode, double parameter) : mode_(mode), param_(parameter) {
  if (mode_ == GreenMode::fourier) {
    if (param_ == 0.0) param_ = 32;
    if (!(param_ >= 8)) throw InputError("fourier mode needs at least 8 terms");
    terms_ = static_cast<int>(param_);
  } else {
    if (param_ == 0.0) param_ = std::sqrt(kPi);
    if (!(param_ > 0.0)) throw InputError("ewald splitting parameter must be positive");
    const double beta2 = param_ * param_;
    // Both sums truncated where the Gaussian factor is below e^{-45}.
    const double k2max = 45.0 * beta2 / (kPi * kPi);
    const int kb = static_cast<int>(std::ceil(std::sqrt(k2max)));
    for (int k1 = 0; k1 <= kb; ++k1)
      for (int k2 = -kb; k2 <= kb; ++k2) {
        if (k1 == 0 && k2 <= 0) continue;
        const double kk = k1 * k1 + k2 * k2;
        if (kk > k2max) continue;
        kvec_.emplace_back(k1, k2);
        kweight_.push_back(2.0 * std::exp(-kPi * kPi * kk / beta2) / (4.0 * kPi * kPi * kk));
      }
    const double rmax = std::sqrt(45.0 / beta2) + 0.75;
    const int nb = static_cast<int>(std::ceil(rmax));
    for (int n1 = -nb; n1 <= nb; ++n1)
      for (int n2 = -nb; n2 <= nb; ++n2) {
        if (n1 == 0 && n2 == 0) continue;
        if (std::hypot(n1, n2) > rmax) continue;
        images_.emplace_back(n1, n2);
      }
  }
  robin_ = mode_ == GreenMode::fourier ? fourier_value(Eigen::Vector2d::Zero(), true)
                                       : ewald_value(Eigen::Vector2d::Zero(), true);
}

double GreenEvaluator::fourier_value(const Eigen::Vector2d& d, bool regular) const {
  const double a = std::abs(d[0]), b = d[1];
  const double q = std::exp(-2.0 * kPi * a);
  const double u = -std::expm1(-2.0 * kPi * a);
  const double sb = std::sin(kPi * b);
  const double Q = u * u + 4.0 * q * sb * sb;
  double value = 0.5 * (a * a - a + 1.0 / 6.0);
  if (regular) {
    const double r2 = a * a + b * b;
    value -= (r2 == 0.0 ? std::log(4.0 * kPi * kPi) : std::log(Q) - std::log(r2)) / (4.0 * kPi);
  } else {
    value -= std::log(Q) / (4.0 * kPi);
  }
  for (int k = 1; k <= terms_; ++k) {
    const double e = std::exp(-2.0 * kPi * k);
    const double w = (std::exp(-2.0 * kPi * k * (1.0 + a)) + std::exp(-2.0 * kPi * k * (1.0 - a))) /
                     (1.0 - e);
    value += w * std::cos(2.0 * kPi * k * b) / (2.0 * kPi * k);
  }
  return value;
}

Eigen::Vector2d GreenEvaluator::fourier_grad(const Eigen::Vector2d& d) const {
  const double a = std::abs(d[0]), b = d[1];
  const double q = std::exp(-2.0 * kPi * a);
  const double u = -std::expm1(-2.0 * kPi * a);
  const double sb = std::sin(kPi * b);
  const double Q = u * u + 4.0 * q * sb * sb;
  const double c2 = std::cos(2.0 * kPi * b), s2 = std::sin(2.0 * kPi * b);
  double ga = a - 0.5 - (q * (c2 - q)) / Q;
  double gb = -(q * s2) / Q;
  for (int k = 1; k <= terms_; ++k) {
    const double e = std::exp(-2.0 * kPi * k);
    const double em = std::exp(-2.0 * kPi * k * (1.0 - a)), ep = std::exp(-2.0 * kPi * k * (1.0 + a));
    ga += (em - ep) / (1.0 - e) * std::cos(2.0 * kPi * k * b);
    gb -= (em + ep) / (1.0 - e) * std::sin(2.0 * kPi * k * b);
  }
  const double sgn = d[0] > 0.0 ? 1.0 : (d[0] < 0.0 ? -1.0 : 0.0);
  return {sgn * ga, gb};
}

double GreenEvaluator::ewald_value(const Eigen::Vector2d& d, bool regular) const {
  const double beta2 = param_ * param_;
  double value = -1.0 / (4.0 * beta2);
  for (std::size_t k = 0; k < kvec_.size(); ++k)
    value += kweight_[k] * std::cos(2.0 * kPi * kvec_[k].dot(d));
  for (const auto& n : images_) value += e1(beta2 * (d + n).squaredNorm()) / (4.0 * kPi);
  const double x = beta2 * d.squaredNorm();
  if (regular) {
    value += (ein(x) - std::numbers::egamma - std::log(beta2)) / (4.0 * kPi);
  } else {
    value += e1(x) / (4.0 * kPi);
  }
  return value;
}

Eigen::Vector2d GreenEvaluator::ewald_grad(const Eigen::Vector2d& d, bool regular) const {
  const double beta2 = param_ * param_;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < kvec_.size(); ++k)
    g -= kweight_[k] * 2.0 * kPi * std::sin(2.0 * kPi * kvec_[k].dot(d)) * kvec_[k];
  for (const auto& n : images_) {
    const Eigen::Vector2d v = d + n;
    const double r2 = v.squaredNorm();
    g -= std::exp(-beta2 * r2) / (2.0 * kPi * r2) * v;
  }
  const double r2 = d.squaredNorm();
  if (regular) {
    // -(1/2pi)(e^{-x} - 1) d / |d|^2, with the limit beta^2 d / 2pi at 0.
    const double x = beta2 * r2;
    const double f = x < 1e-300 ? beta2 : -std::expm1(-x) / r2;
    g += f / (2.0 * kPi) * d;
  } else {
    g -= std::exp(-beta2 * r2) / (2.0 * kPi * r2) * d;
  }
  return g;
}

double GreenEvaluator::green(const TorusPoint& x, const TorusPoint& y) const {
  const Eigen::Vector2d d = displacement(x, y);
  if (d.norm() <= kCoincident) throw SingularityError("green() at coincident points; use regular_part");
  return mode_ == GreenMode::fourier ? fourier_value(d, false) : ewald_value(d, false);
}

Eigen::Vector2d GreenEvaluator::grad1_green(const TorusPoint& x, const TorusPoint& y) const {
  const Eigen::Vector2d d = displacement(x, y);
  if (d.norm() <= kCoincident) throw SingularityError("grad1_green() at coincident points");
  return mode_ == GreenMode::fourier ? fourier_grad(d) : ewald_grad(d, false);
}

double GreenEvaluator::regular_part(const TorusPoint& x, const TorusPoint& y) const {
  const Eigen::Vector2d d = displacement(x, y);
  return mode_ == GreenMode::fourier ? fourier_value(d, true) : ewald_value(d, true);
}

Eigen::Vector2d GreenEvaluator::grad1_regular(const TorusPoint& x, const TorusPoint& y) const {
  const Eigen::Vector2d d = displacement(x, y);
  const double r2 = d.squaredNorm();
  if (mode_ == GreenMode::ewald) return ewald_grad(d, true);
  if (r2 == 0.0) return Eigen::Vector2d::Zero();
  return fourier_grad(d) + d / (2.0 * kPi * r2);
}

double GreenEvaluator::gstar(const std::vector<TorusPoint>& points, int t, int l) const {
  const int N = static_cast<int>(points.size());
  if (t < 0 || t >= N || l < 0 || l >= N) throw InputError("gstar index out of range");
  if (t == l) return robin_;
  if (torus_distance(points[t], points[l]) <= kCoincident) {
    std::ostringstream os;
    os << "points " << t + 1 << " and " << l + 1 << " coincide";
    throw ConfigurationError(os.str());
  }
  return green(points[t], points[l]);
}

double GreenEvaluator::gstar_sum(const std::vector<TorusPoint>& points, int t) const {
  double s = 0.0;
  for (int l = 0; l < static_cast<int>(points.size()); ++l) s += gstar(points, t, l);
  return s;
}

Eigen::Vector2d GreenEvaluator::gstar_grad(const std::vector<TorusPoint>& points, int t) const {
  const int N = static_cast<int>(points.size());
  if (t < 0 || t >= N) throw InputError("gstar index out of range");
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int l = 0; l < N; ++l) {
    if (l == t) continue;
    if (torus_distance(points[t], points[l]) <= kCoincident) {
      std::ostringstream os;
      os << "points " << t + 1 << " and " << l + 1 << " coincide";
      throw ConfigurationError(os.str());
    }
    g += grad1_green(points[t], points[l]);
  }
  return g;
}

}  // namespace liouville
