#include "liouville/mass_map.hpp"

#include "liouville/error.hpp"
#include "liouville/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace liouville {

namespace {

HeightVector heights(const Vector& alpha_hat) {
  HeightVector h{Vector::Zero(alpha_hat.size() + 1)};
  h.alpha.tail(alpha_hat.size()) = alpha_hat;
  return h;
}

Matrix central_difference(const InteractionMatrix& a, const Vector& x, double h,
                          const RadialOptions& opt) {
  const int k = static_cast<int>(x.size());
  Matrix J(k, k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t c) {
    Vector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const Vector d = (sigma_of_alpha(a, xp, opt) - sigma_of_alpha(a, xm, opt)).tail(k) / (2.0 * h);
    J.col(static_cast<int>(c)) = d;
  });
  return J;
}

}  // namespace

Vector sigma_of_alpha(const InteractionMatrix& a, const Vector& alpha_hat, const RadialOptions& opt) {
  if (alpha_hat.size() != a.size() - 1) throw InputError("alpha_hat must have n-1 entries");
  return solve_global(a, heights(alpha_hat), opt).sigma;
}

MassMapSample jacobian(const InteractionMatrix& a, const Vector& alpha_hat, double h_step,
                       const RadialOptions& opt) {
  if (!(h_step >= 1e-5 && h_step <= 1e-2)) throw InputError("h_step must lie in [1e-5, 1e-2]");
  MassMapSample s;
  s.alpha_hat = alpha_hat;
  s.sigma = sigma_of_alpha(a, alpha_hat, opt);
  const int k = static_cast<int>(alpha_hat.size());
  if (k == 0) {
    s.jacobian = Matrix(0, 0);
    return s;
  }
  const Matrix coarse = central_difference(a, alpha_hat, h_step, opt);
  const Matrix fine = central_difference(a, alpha_hat, h_step / 2.0, opt);
  s.jacobian = (4.0 * fine - coarse) / 3.0;
  s.det = s.jacobian.determinant();
  Eigen::JacobiSVD<Matrix> svd(s.jacobian);
  const auto& sv = svd.singularValues();
  s.cond = sv[k - 1] > 0.0 ? sv[0] / sv[k - 1] : std::numeric_limits<double>::infinity();
  return s;
}

InversionResult invert(const InteractionMatrix& a, const Vector& target, const Vector& alpha0,
                       const InversionOptions& inv, const RadialOptions& opt) {
  const int n = a.size();
  if (target.size() != n || alpha0.size() != n - 1) throw InputError("dimension mismatch");
  if (!(target.array() > 0.0).all()) throw InputError("target masses must be positive");
  {
    const Vector m = a.a() * target;
    const double defect = std::abs(target.dot(m - Vector::Constant(n, 4.0))) / target.sum();
    if (defect >= inv.pohozaev_tol) {
      std::ostringstream os;
      os << "target is off the Pohozaev surface: defect " << defect;
      throw PreconditionError(os.str());
    }
  }

  InversionResult res;
  res.alpha_hat = alpha0;
  const double scale = target.norm();
  auto rel = [&](const Vector& sig) { return (sig - target).norm() / scale; };

  res.sigma = sigma_of_alpha(a, res.alpha_hat, opt);
  res.residual_trace.push_back(rel(res.sigma));
  // The free components are driven well below rel_tol; sigma_1 then follows
  // from the Pohozaev constraint.
  const double inner_tol = 1e-2 * inv.rel_tol;
  auto free_res = [&](const Vector& sig) { return (sig - target).tail(n - 1).norm() / scale; };

  while (res.residual_trace.back() > inv.rel_tol || free_res(res.sigma) > inner_tol) {
    if (n == 1) break;
    if (res.iterations >= inv.max_iter) {
      std::ostringstream os;
      os << "Newton inversion did not converge; residual trace:";
      for (double r : res.residual_trace) os << ' ' << r;
      throw NonconvergenceError(os.str());
    }
    ++res.iterations;
    const Matrix J = jacobian(a, res.alpha_hat, inv.h_step, opt).jacobian;
    const Vector step = J.fullPivLu().solve(-(res.sigma - target).tail(n - 1));
    double lambda = 1.0;
    const double current = free_res(res.sigma);
    bool accepted = false;
    for (int h = 0; h <= inv.max_halvings; ++h, lambda *= 0.5) {
      const Vector trial = res.alpha_hat + lambda * step;
      try {
        const Vector sig = sigma_of_alpha(a, trial, opt);
        if (free_res(sig) < current) {
          res.alpha_hat = trial;
          res.sigma = sig;
          accepted = true;
          break;
        }
      } catch (const NonintegrableError&) {
      }
    }
    res.residual_trace.push_back(rel(res.sigma));
    if (!accepted) {
      if (res.residual_trace.back() <= inv.rel_tol) break;
      std::ostringstream os;
      os << "Newton inversion stalled after " << res.iterations << " iterations; residual trace:";
      for (double r : res.residual_trace) os << ' ' << r;
      throw NonconvergenceError(os.str());
    }
  }
  if (res.residual_trace.back() > inv.rel_tol) {
    std::ostringstream os;
    os << "free masses matched but sigma_1 residual is " << res.residual_trace.back();
    throw NonconvergenceError(os.str());
  }
  return res;
}

}  // namespace liouville
