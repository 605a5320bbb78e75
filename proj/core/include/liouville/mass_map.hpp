#pragma once

#include "liouville/radial_solver.hpp"

#include <vector>

namespace liouville {

/// sigma as a function of the free heights (alpha_2..alpha_n) with alpha_1 = 0.
Vector sigma_of_alpha(const InteractionMatrix& a, const Vector& alpha_hat,
                      const RadialOptions& opt = {});

struct MassMapSample {
  Vector alpha_hat;
  Vector sigma;
  Matrix jacobian;   // d(sigma_2..sigma_n) / d(alpha_2..alpha_n)
  double det = 1.0;
  double cond = 1.0;
};

/// Central differences at h and h/2 combined by one Richardson step.
/// A singular Jacobian is reported through det/cond, never thrown.
MassMapSample jacobian(const InteractionMatrix& a, const Vector& alpha_hat, double h_step = 1e-3,
                       const RadialOptions& opt = {});

struct InversionOptions {
  double rel_tol = 1e-8;
  int max_iter = 50;
  int max_halvings = 30;
  double pohozaev_tol = 1e-6;
  double h_step = 1e-3;
};

struct InversionResult {
  Vector alpha_hat;
  Vector sigma;
  int iterations = 0;
  std::vector<double> residual_trace;  // ||sigma - target|| / ||target|| per iterate
};

/// Damped Newton for sigma_of_alpha(alpha_hat) = sigma_target.
InversionResult invert(const InteractionMatrix& a, const Vector& sigma_target, const Vector& alpha0,
                       const InversionOptions& inv = {}, const RadialOptions& opt = {});

}  // namespace liouville
