#pragma once

#include "liouville/system_algebra.hpp"
#include "liouville/torus_grid.hpp"
#include "liouville/weight_function.hpp"

#include <vector>

namespace liouville {

/// One grid field per component. In the mean-free gauge every u_i has zero
/// grid mean; after normalize() the fields are Theta_i = u_i - log int h_i e^{u_i}.
///
/// `lap` holds Delta u_i when the state came out of the solver. Newton iterates
/// on these Laplacians and recovers u by the inverse Laplacian, because the
/// spectral Laplacian of a field stored on the grid amplifies its rounding noise
/// by |k|^2 (about 1e-10 in the residual at M = 512). When `lap` is empty the
/// residual differentiates u directly.
struct FieldState {
  int M = 0;
  std::vector<Field> u;
  bool normalized = false;
  std::vector<Field> lap;

  int n() const { return static_cast<int>(u.size()); }
};

struct ResidualReport {
  std::vector<Field> F;
  double norm = 0.0;  // sqrt(sum_i mean(F_i^2))
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 30;
  double gmres_tol = 1e-8;
  int gmres_max = 1500;
};

struct NewtonResult {
  FieldState state;
  double residual = 0.0;
  int iterations = 0;
  int linear_iterations = 0;
  std::vector<double> trace;
};

/// Discretized mean-field Liouville system
///   Delta u_i + sum_j a_ij rho_j (h_j e^{u_j} / int h_j e^{u_j} - 1) = 0
/// with a spectral Laplacian and the exponential nonlinearity dealiased by the 2/3 rule.
class MeanFieldSystem {
 public:
  MeanFieldSystem(InteractionMatrix a, std::vector<WeightFunction> weights, int M);

  int n() const { return a_.size(); }
  int M() const { return grid_.M(); }
  const TorusGrid& grid() const { return grid_; }
  const InteractionMatrix& matrix() const { return a_; }
  const std::vector<WeightFunction>& weights() const { return weights_; }
  const Field& weight_samples(int i) const { return h_[i]; }

  /// Precomputed nonlinearity at a state: E_j = h_j e^{u_j - max u_j},
  /// its dealiased projection PE_j and Z_j = mean(E_j).
  struct Linearization {
    std::vector<Field> E, PE;
    Vector Z;
  };
  Linearization linearize(const FieldState& s) const;

  ResidualReport residual(const FieldState& s, const Vector& rho) const;
  ResidualReport residual(const Linearization& lin, const FieldState& s, const Vector& rho) const;

  /// Directional derivative of the residual in u, on stacked fields.
  void apply_jacobian(const Linearization& lin, const Vector& rho, const Field& v, Field& out) const;
  /// d residual / d t along rho(t) = rho + t * direction.
  Field parameter_derivative(const Linearization& lin, const Vector& direction) const;
  /// Inverse Laplacian per component (zero-mean), used as right preconditioner.
  void precondition(const Field& v, Field& out) const;

  Field stack(const FieldState& s) const;
  FieldState unstack(const Field& v) const;
  /// Stacked Laplacians (computed from u when the state carries none).
  Field stack_laplacian(const FieldState& s) const;
  /// State with the given stacked Laplacians and u = Delta^{-1} of them.
  FieldState from_laplacian(const Field& w) const;
  FieldState zero_state() const;
  /// Removes the grid mean of every component.
  void project(FieldState& s) const;

  NewtonResult newton_solve(const FieldState& s0, const Vector& rho, const NewtonOptions& opt = {}) const;

  /// Theta_i = u_i - log mean(h_i e^{u_i}); mean(h_i e^{Theta_i}) = 1.
  FieldState normalize(const FieldState& s) const;
  /// Spectral interpolation of a state onto another resolution.
  FieldState resample(const FieldState& s, int M_new) const;

 private:
  InteractionMatrix a_;
  std::vector<WeightFunction> weights_;
  TorusGrid grid_;
  std::vector<Field> h_;
};

struct ContinuationRecord {
  int step = 0;
  int resolution = 0;
  Vector rho;
  double lambda_measured = 0.0;           // Lambda_I(rho) at the target level
  std::vector<TorusPoint> bubble_points;  // sorted by height
  std::vector<double> M_kt;
  std::vector<double> eps_kt;             // e^{-M_kt / 2}
  Matrix rho_it;                          // n x N, rho_i int_{B(p_t, delta0)} h_i e^{Theta_i}
  Vector rho_ib;                          // remainder outside the disks
  Matrix local_masses;                    // rho_it / (2 pi)
  Matrix sigma_unweighted;                // int_{B(p_t, delta0)} e^{Theta_i}
  double height_spread = 0.0;             // max_{s,t} |M_ks - M_kt|
  double mass_spread = 0.0;               // max_{i,s,t} |rho_is - rho_it|
  double max_theta = 0.0;                 // max_i max_x Theta_i
  double max_u = 0.0;                     // max_i max_x u_i in the mean-free gauge
  double residual_norm = 0.0;
  bool arclength = false;

  int N() const { return static_cast<int>(M_kt.size()); }
};

struct Peak {
  int index = 0;
  double height = 0.0;
  double prominence = 0.0;
};

/// Local maxima of a periodic grid field with topographic prominence at least
/// `min_prominence`, highest first (8-neighbour connectivity).
std::vector<Peak> detect_peaks(const TorusGrid& grid, const Field& phi, double min_prominence);

constexpr double kBubbleProminence = 2.0;

/// Bubble detection and the local quantities at one solution. Requires
/// delta0 >= 4 grid spacings and detected bubbles separated by more than 2 delta0.
ContinuationRecord measure(const MeanFieldSystem& sys, const FieldState& s, const Vector& rho, double delta0,
                           int level = 1);

}  // namespace liouville
