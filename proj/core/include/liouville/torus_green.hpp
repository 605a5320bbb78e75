#pragma once

#include "liouville/torus.hpp"

#include <vector>

namespace liouville {

enum class GreenMode { fourier, ewald };

/// Zero-mean Green's function of the flat unit torus,
/// -Delta G(., y) = delta_y - 1, and its regular part
/// gamma(x, y) = G(x, y) + (1/2pi) log|x - y|.
///
/// fourier: one Fourier sum done in closed form, the other summed with
///   `parameter` terms (default 32), exponentially convergent.
/// ewald: Gaussian splitting with width `parameter` (default sqrt(pi)).
class GreenEvaluator {
 public:
  explicit GreenEvaluator(GreenMode mode = GreenMode::fourier, double parameter = 0.0);

  GreenMode mode() const { return mode_; }
  double parameter() const { return param_; }

  /// Throws SingularityError when x and y coincide (distance <= 1e-12).
  double green(const TorusPoint& x, const TorusPoint& y) const;
  Eigen::Vector2d grad1_green(const TorusPoint& x, const TorusPoint& y) const;

  double regular_part(const TorusPoint& x, const TorusPoint& y) const;
  Eigen::Vector2d grad1_regular(const TorusPoint& x, const TorusPoint& y) const;

  /// gamma(x, x), the same for every x.
  double robin() const { return robin_; }

  /// G*(p_t, p_l): gamma(p_t, p_t) for t == l, else G(p_t, p_l). Indices are 0-based.
  double gstar(const std::vector<TorusPoint>& points, int t, int l) const;
  /// sum_l G*(p_t, p_l)
  double gstar_sum(const std::vector<TorusPoint>& points, int t) const;
  /// sum_l grad_1 G*(p_t, p_l); the diagonal term vanishes.
  Eigen::Vector2d gstar_grad(const std::vector<TorusPoint>& points, int t) const;

 private:
  // Value of G (or gamma when `regular`) and its gradient in d = x - y.
  double fourier_value(const Eigen::Vector2d& d, bool regular) const;
  Eigen::Vector2d fourier_grad(const Eigen::Vector2d& d) const;
  double ewald_value(const Eigen::Vector2d& d, bool regular) const;
  Eigen::Vector2d ewald_grad(const Eigen::Vector2d& d, bool regular) const;

  GreenMode mode_;
  double param_;
  int terms_ = 0;
  std::vector<Eigen::Vector2d> kvec_;   // ewald reciprocal vectors, one per +/- pair
  std::vector<double> kweight_;         // 2 e^{-pi^2 k^2/beta^2} / (4 pi^2 k^2)
  std::vector<Eigen::Vector2d> images_;  // ewald real-space lattice vectors, n != 0
  double robin_ = 0.0;
};

}  // namespace liouville
