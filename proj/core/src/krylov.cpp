#include "liouville/krylov.hpp"

#include <cmath>
#include <vector>

namespace liouville {

GmresResult gmres(const LinearOperator& A, const LinearOperator& precond, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, const GmresOptions& opt) {
  using Vec = Eigen::VectorXd;
  const long n = b.size();
  if (x.size() != n) x = Vec::Zero(n);
  GmresResult res;
  const double bnorm = b.norm();
  const double target = std::max(opt.abs_tol, opt.rel_tol * bnorm);
  const int m = opt.restart;

  Vec r(n), w(n), z(n);
  std::vector<Vec> V(m + 1, Vec(n));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  auto apply_precond = [&](const Vec& in, Vec& out) {
    if (precond) precond(in, out);
    else out = in;
  };

  while (true) {
    A(x, w);
    r = b - w;
    double beta = r.norm();
    res.residual = beta;
    if (beta <= target) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= opt.max_iter) return res;

    V[0] = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    int j = 0;
    for (; j < m && res.iterations < opt.max_iter; ++j) {
      ++res.iterations;
      apply_precond(V[j], z);
      A(z, w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V[i].dot(w);
        w -= H(i, j) * V[i];
      }
      // One reorthogonalization pass keeps the basis orthogonal when the
      // preconditioned operator is badly conditioned.
      for (int i = 0; i <= j; ++i) {
        const double c = V[i].dot(w);
        H(i, j) += c;
        w -= c * V[i];
      }
      const double hn = w.norm();
      H(j + 1, j) = hn;
      if (hn > 0.0) V[j + 1] = w / hn;
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double d = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = d == 0.0 ? 1.0 : H(j, j) / d;
      sn[j] = d == 0.0 ? 0.0 : H(j + 1, j) / d;
      H(j, j) = d;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) <= target || hn == 0.0) {
        ++j;
        break;
      }
    }
    // Back substitution and update.
    Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    Vec update = Vec::Zero(n);
    for (int i = 0; i < j; ++i) update += y[i] * V[i];
    apply_precond(update, z);
    x += z;
  }
}

}  // namespace liouville
