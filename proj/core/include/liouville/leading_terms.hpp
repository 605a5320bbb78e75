#pragma once

#include "liouville/blowup_geometry.hpp"
#include "liouville/radial_solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace liouville {

/// Voronoi cell of one point on the torus, as a convex polygon in
/// coordinates centred at the point (counter-clockwise vertices).
struct VoronoiCell {
  TorusPoint center;
  std::vector<Eigen::Vector2d> vertices;

  double area() const;
  /// Distance from the centre to the nearest edge.
  double inradius() const;
  /// r0 = inradius / 2, the subtraction radius.
  double subtraction_radius() const { return 0.5 * inradius(); }
};

struct PartitionCells {
  std::vector<VoronoiCell> cells;
  std::string description() const;
};

/// Voronoi cells of the points with respect to all periodic images.
PartitionCells voronoi_cells(const std::vector<TorusPoint>& points);

struct BracketOptions {
  int angular_points = 64;  // trapezoid nodes on each circle
  int order = 20;           // Gauss-Legendre order per panel (10, 15, 20, 30)
  int taylor_levels = 6;    // the innermost disk of radius r0 / 2^levels uses the Taylor model
  double resolution_tol = 1e-7;
};

/// Smooth factor F of an integrand |x - p|^{-m} F(x) on one cell, given as
/// F - 1 (to keep precision near the centre) together with Delta F(p) / 4.
struct CellDensity {
  std::function<double(const Eigen::Vector2d& local)> f_minus_one;
  double quadratic_coefficient = 0.0;
};

/// delta0^{2-m} - (m-2)/(2 pi) int_{cell \ B(delta0)} r^{-m} F, evaluated with the
/// pure r^{-m} part integrated in closed form on B(r0) \ B(delta0).
/// delta0 = 0 gives the limit.
double bracket_for_density(const VoronoiCell& cell, double m, double delta0, const CellDensity& density,
                           const BracketOptions& opt = {});

/// int_{cell \ B(delta0)} r^{-m} F by direct polar quadrature (no subtraction).
double raw_cell_integral(const VoronoiCell& cell, double m, double delta0, const CellDensity& density,
                         const BracketOptions& opt = {});

/// The smooth factor (h_i(x)/h_i(p_t)) e^{2 pi m sum_l (G(x,p_l) - G*(p_t,p_l))} |x - p_t|^m.
CellDensity bracket_density(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t);

/// Regularized bracket of component i at point t (0-based); delta0 in [1e-3, 0.1].
double regularized_bracket(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t,
                           double delta0, const BracketOptions& opt = {});
/// Its delta0 -> 0 limit.
double bracket_limit(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t,
                     const BracketOptions& opt = {});
/// Finite-delta0 value plus the analytic quadratic-order remainder on B(delta0).
double bracket_extrapolated(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t,
                            double delta0, const BracketOptions& opt = {});

struct LeadingTermReport {
  std::vector<int> I1;
  double m = 0.0;
  Vector c;
  std::vector<double> delta0s;
  std::vector<Matrix> bracket;               // per delta0: n x N (rows outside I_1 are NaN)
  std::vector<Matrix> bracket_extrapolated;  // per delta0
  Matrix bracket_limit;                      // n x N
  std::vector<double> D_finite;              // per delta0
  double D_total = 0.0;                      // from the limits
  double cauchy = 0.0;  // max relative change of the extrapolated brackets between halvings
  int convention_factor = 2;
  std::string cells;

  /// Predicted Lambda_I = convention_factor * D * eps^{m-2} / N.
  double lambda_prediction(double eps) const;
};

/// D = sum_{i in I_1} e^{D_i - alpha_i} sum_t c_t bracket_limit(i, t).
/// The summary supplies D_i - alpha_i and must carry the masses of the configuration.
LeadingTermReport d_total(const BlowupConfiguration& config, const GlobalSolutionSummary& summary,
                          const GreenEvaluator& green, std::vector<double> delta0s = {0.08, 0.04, 0.02},
                          int convention_factor = 2, const BracketOptions& opt = {});

struct BCoefficientReport {
  Matrix b;  // n x N
  /// -4 sum_{i,t} b_it eps^2 log(1/eps)
  double lambda_prediction(double eps) const;
};

/// b_it for the regime where every m_i = 4.
BCoefficientReport b_coefficients(const BlowupConfiguration& config, const GlobalSolutionSummary& summary,
                                  const GreenEvaluator& green);

}  // namespace liouville
