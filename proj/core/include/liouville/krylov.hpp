#pragma once

#include <Eigen/Dense>

#include <functional>

namespace liouville {

using LinearOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct GmresOptions {
  int restart = 80;
  int max_iter = 800;
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
};

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  // true residual norm |b - A x| at exit
  bool converged = false;
};

/// Restarted GMRES with right preconditioning: solves A M^{-1} y = b - A x0 and
/// returns x = x0 + M^{-1} y in `x`. `precond` applies M^{-1}; pass an empty
/// function for none.
GmresResult gmres(const LinearOperator& A, const LinearOperator& precond, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, const GmresOptions& opt = {});

}  // namespace liouville
