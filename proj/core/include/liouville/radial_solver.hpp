#pragma once

#include "liouville/system_algebra.hpp"

#include <vector>

namespace liouville {

/// Height deficits alpha_i = -U_i(0). Normalized vectors have min_i alpha_i = 0.
struct HeightVector {
  Vector alpha;

  int size() const { return static_cast<int>(alpha.size()); }
  bool is_normalized(double tol = 1e-14) const;
  /// Shifts by the minimum so that max_i U_i(0) = 0.
  HeightVector normalized() const;
};

struct RadialOptions {
  double r_max = 1e5;
  double tol = 1e-10;
  /// Upper bound on the stored grid spacing (in r below 1, in log r above).
  double max_grid_step = 0.02;
  /// Effective mass m_i(r_max) = -r U_i'(r_max) must exceed 2 + margin.
  double mass_margin = 1e-3;
};

/// One radial solution of -Delta U_i = sum_j a_ij e^{U_j} on R^2, sampled on the
/// accepted integrator steps, plus the far-field state used by the tail
/// corrections in summarize().
struct RadialProfile {
  int n = 0;
  HeightVector alpha;
  double r_max = 0.0;
  double tol = 0.0;
  double r_start = 0.0;          // end of the series startup region
  std::vector<double> r;         // r[0] = 0 < r[1] = r_start < ... < r.back() = r_max
  Matrix U;                      // n x r.size()
  Matrix dU;                     // n x r.size(), dU/dr
  Matrix mass;                   // n x r.size(), int_0^r e^{U_i} s ds
  Vector series_quadratic;       // U_i = -alpha_i - q_i r^2 + c_i r^4 near 0
  Vector series_quartic;

  Matrix coupling;               // copy of A, used by r_derivative()

  // State at the end of the tail extension (r_far >= r_max).
  double r_far = 0.0;
  double log_r_far = 0.0;
  Vector U_far, slope_far, mass_far, log_moment_far;  // slope = r U'
  // Same quantities at r_max.
  Vector slope_at_rmax, mass_at_rmax, log_moment_at_rmax;

  /// U_i(r) by cubic Hermite interpolation of the stored steps (series below r_start).
  double value(int i, double radius) const;
  /// r U_i'(r), same interpolation.
  double r_derivative(int i, double radius) const;
};

RadialProfile integrate(const InteractionMatrix& a, const HeightVector& alpha,
                        const RadialOptions& opt = {});

struct GlobalSolutionSummary {
  HeightVector alpha;
  Vector sigma;          // int_0^inf e^{U_i} r dr
  Vector m;              // A sigma
  double m_min = 0.0;
  Vector D;              // int_0^inf log r sum_j a_ij e^{U_j} r dr
  Vector m_from_slope;   // -r U_i'(r_far), independent estimate of m_i
  double tail_residual = 0.0;

  /// |sum_i sigma_i (m_i - 4)| / sum_i sigma_i
  double pohozaev_defect() const;
  /// |sum_ij a^ij ((m_i-2)/2)((m_j-2)/2) - sum_ij a^ij|
  double quadratic_pohozaev_defect(const InteractionMatrix& a) const;
  /// True when m_min < 4 - tol or max_i |m_i - 4| < tol.
  bool satisfies_dichotomy(double tol) const;
};

GlobalSolutionSummary summarize(const InteractionMatrix& a, const RadialProfile& profile);

/// Convenience: integrate + summarize.
GlobalSolutionSummary solve_global(const InteractionMatrix& a, const HeightVector& alpha,
                                   const RadialOptions& opt = {});

struct ExpansionComponent {
  double sup_residual = 0.0;       // two-term model vs profile over the window
  double decay_exponent = 0.0;     // log-log slope of |residual|; NaN when at noise floor
  double kept_exponent = 0.0;      // 2 - min_j{m_j : a_ij > 0}
  double fitted_constant = 0.0;    // constant of the least-squares fit of U_i + m_i log r
  double expected_constant = 0.0;  // D_i - alpha_i
  double correction_measured = 0.0;  // U_i + m_i log r - (D_i - alpha_i) at the window start
  double correction_model = 0.0;     // -sum_j a_ij e^{D_j-alpha_j} (m_j-2)^-2 r^{2-m_j} there
};

struct ExpansionReport {
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::vector<ExpansionComponent> components;
};

/// Compares the profile with U_i = -m_i log r + D_i - alpha_i
/// - sum_j a_ij (m_j-2)^-2 e^{D_j-alpha_j} r^{2-m_j} on [r_lo, r_hi] subset of
/// [r_max/100, r_max].
ExpansionReport expansion_residual(const InteractionMatrix& a, const GlobalSolutionSummary& summary,
                                   const RadialProfile& profile, double r_lo, double r_hi);

}  // namespace liouville
