#pragma once

#include "liouville/system_algebra.hpp"
#include "liouville/torus_green.hpp"
#include "liouville/weight_function.hpp"

#include <optional>
#include <vector>

namespace liouville {

constexpr double kMinSeparation = 1e-3;

struct BlowupConfiguration {
  std::vector<TorusPoint> points;      // p_1..p_N
  Vector masses;                       // m_1..m_n
  std::vector<WeightFunction> weights; // h_1..h_n
  double curvature = 0.0;              // Gaussian curvature of the flat torus

  int N() const { return static_cast<int>(points.size()); }
  int n() const { return static_cast<int>(masses.size()); }
  double m() const { return masses.minCoeff(); }
  /// Throws ConfigurationError on size mismatch, m_i <= 2 or points closer than 1e-3.
  void validate() const;
};

/// Indices i with |m_i - m| < 1e-6 m.
std::vector<int> minimal_mass_indices(const Vector& masses);

/// R_t = sum_i w_i (grad log h_i(p_t) + 2 pi m_i sum_l grad_1 G*(p_t, p_l)) with w_i = 1,
/// or the supplied per-component weights (e.g. local masses) for the weighted variant.
std::vector<Eigen::Vector2d> location_residual(const BlowupConfiguration& config,
                                               const GreenEvaluator& green,
                                               const std::optional<Vector>& component_weights = {});

enum class Gauge { automatic, fix_first, free };

struct LocationOptions {
  Gauge gauge = Gauge::automatic;
  double tol = 1e-9;
  int max_iter = 50;
  double fd_step = 1e-6;
};

struct LocationResult {
  BlowupConfiguration config;
  int iterations = 0;
  bool gauge_fixed = false;
  std::vector<double> residual_trace;  // max_t |R_t| per iterate
};

/// Damped Newton on the point coordinates (with p_1 pinned under the
/// translation gauge) until max_t |R_t| < tol.
LocationResult solve_locations(const std::vector<WeightFunction>& weights, const Vector& masses,
                               const std::vector<TorusPoint>& init, const GreenEvaluator& green,
                               const LocationOptions& opt = {});

struct CoefficientReport {
  Matrix H;                                // n x N, H_{i,t}
  Vector c;                                // N, from the first index of I_1
  Matrix c_by_component;                   // |I_1| x N
  std::vector<int> I1;
  double c_spread = 0.0;                   // max relative deviation of c across I_1
  bool c_consistent = true;                // c_spread <= 1e-6
  double compatibility_defect = 0.0;       // max_i max_{t,s} |H_{i,t} - H_{i,s}|
  std::vector<Eigen::Vector2d> residuals;  // location residuals R_t
};

CoefficientReport coefficient_report(const BlowupConfiguration& config, const GreenEvaluator& green);

}  // namespace liouville
