#include "liouville/radial_solver.hpp"

#include "liouville/error.hpp"
#include "liouville/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace liouville {

bool HeightVector::is_normalized(double tol) const {
  return alpha.size() > 0 && std::abs(alpha.minCoeff()) <= tol;
}

HeightVector HeightVector::normalized() const {
  HeightVector h{alpha};
  h.alpha.array() -= alpha.minCoeff();
  return h;
}

namespace {

// Layout of the augmented state: [U | P = r U' | S = int e^U r | T = int log r e^U r].
struct Layout {
  int n;
  auto U(const ode::State& y) const { return y.segment(0, n); }
  auto P(const ode::State& y) const { return y.segment(n, n); }
  auto S(const ode::State& y) const { return y.segment(2 * n, n); }
  auto T(const ode::State& y) const { return y.segment(3 * n, n); }
};

double tail_bound(const Layout& L, const ode::State& y, double s) {
  double worst = 0.0;
  for (int i = 0; i < L.n; ++i) {
    const double mu = -y[L.n + i];
    if (mu <= 2.0) return std::numeric_limits<double>::infinity();
    const double e = std::exp(y[i] + 2.0 * s);
    const double k = mu - 2.0;
    worst = std::max({worst, e / k, e * (std::abs(s) / k + 1.0 / (k * k))});
  }
  return worst;
}

}  // namespace

RadialProfile integrate(const InteractionMatrix& a, const HeightVector& alpha, const RadialOptions& opt) {
  const int n = a.size();
  if (alpha.size() != n) throw InputError("height vector has wrong length");
  if (!alpha.alpha.allFinite()) throw InputError("height vector is not finite");
  if (!(opt.r_max >= 1e3)) throw InputError("r_max must be at least 1e3");
  if (!(opt.tol > 1e-14 && opt.tol < 1e-3)) throw InputError("tol must lie in (1e-14, 1e-3)");
  if (!(opt.max_grid_step > 0.0)) throw InputError("max_grid_step must be positive");

  const Matrix& A = a.a();
  const Vector w0 = (-alpha.alpha).array().exp();
  const Vector f = A * w0;
  const Vector quartic = A * w0.cwiseProduct(f) / 64.0;

  RadialProfile prof;
  prof.n = n;
  prof.alpha = alpha;
  prof.r_max = opt.r_max;
  prof.tol = opt.tol;
  prof.series_quadratic = f / 4.0;
  prof.series_quartic = quartic;
  prof.coupling = A;

  const double cmax = quartic.cwiseAbs().maxCoeff();
  double rs = cmax > 0.0 ? std::pow(opt.tol / cmax, 0.25) : 0.5;
  rs = std::min(rs, 0.5);
  prof.r_start = rs;

  const Layout L{n};
  ode::State y(4 * n);
  {
    const double r2 = rs * rs, r4 = r2 * r2, lr = std::log(rs);
    for (int i = 0; i < n; ++i) {
      y[i] = -alpha.alpha[i] - f[i] * r2 / 4.0 + quartic[i] * r4;
      y[n + i] = -f[i] * r2 / 2.0 + 4.0 * quartic[i] * r4;
      y[2 * n + i] = w0[i] * (r2 / 2.0 - f[i] * r4 / 16.0);
      y[3 * n + i] = w0[i] * (r2 / 2.0 * (lr - 0.5) - f[i] / 16.0 * r4 * (lr - 0.25));
    }
  }

  std::vector<double> rr{0.0};
  std::vector<Vector> Us{-alpha.alpha}, dUs{Vector::Zero(n)}, Ss{Vector::Zero(n)};
  auto record = [&](double r, const ode::State& s) {
    rr.push_back(r);
    Us.emplace_back(L.U(s));
    dUs.emplace_back(L.P(s) / r);
    Ss.emplace_back(L.S(s));
  };
  record(rs, y);

  Vector e(n);
  auto rhs_r = [&](double r, const ode::State& s, ode::State& d) {
    e = L.U(s).array().exp();
    const double lr = std::log(r);
    d.segment(0, n) = L.P(s) / r;
    d.segment(n, n) = -r * (A * e);
    d.segment(2 * n, n) = r * e;
    d.segment(3 * n, n) = r * lr * e;
  };
  auto rhs_s = [&](double t, const ode::State& s, ode::State& d) {
    e = (L.U(s).array() + 2.0 * t).exp();
    d.segment(0, n) = L.P(s);
    d.segment(n, n) = -(A * e);
    d.segment(2 * n, n) = e;
    d.segment(3 * n, n) = t * e;
  };

  ode::Options o;
  o.rtol = opt.tol;
  o.atol = opt.tol;
  o.h_init = std::min(rs, opt.max_grid_step) * 0.1;
  o.h_max = opt.max_grid_step;

  if (rs < 1.0) {
    ode::integrate(rhs_r, rs, 1.0, y, o, [&](double r, const ode::State& s, const ode::State&) {
      record(r, s);
      return true;
    });
  }
  const double s_max = std::log(opt.r_max);
  o.h_init = opt.max_grid_step * 0.5;
  ode::integrate(rhs_s, std::max(0.0, std::log(rs)), s_max, y, o,
                 [&](double s, const ode::State& st, const ode::State&) {
                   record(std::exp(s), st);
                   return true;
                 });

  prof.r = rr;
  const int K = static_cast<int>(rr.size());
  prof.U.resize(n, K);
  prof.dU.resize(n, K);
  prof.mass.resize(n, K);
  for (int k = 0; k < K; ++k) {
    prof.U.col(k) = Us[k];
    prof.dU.col(k) = dUs[k];
    prof.mass.col(k) = Ss[k];
  }
  prof.r.back() = opt.r_max;

  prof.slope_at_rmax = L.P(y);
  prof.mass_at_rmax = L.S(y);
  prof.log_moment_at_rmax = L.T(y);
  for (int i = 0; i < n; ++i) {
    if (-prof.slope_at_rmax[i] <= 2.0 + opt.mass_margin) {
      std::ostringstream os;
      os << "component " << i + 1 << " has effective mass " << -prof.slope_at_rmax[i]
         << " <= 2 + " << opt.mass_margin << " at r_max = " << opt.r_max;
      throw NonintegrableError(os.str());
    }
  }

  // Tail extension: keep integrating in log r until the remaining mass and
  // log-moment (estimated from the local power law) drop below tol / 1000.
  const double target = 1e-3 * opt.tol;
  const double s_cap = s_max + 5000.0;
  double s_end = s_max;
  if (tail_bound(L, y, s_max) > target) {
    o.h_max = 0.5;
    const auto st = ode::integrate(rhs_s, s_max, s_cap, y, o,
                                   [&](double s, const ode::State& yy, const ode::State&) {
                                     return tail_bound(L, yy, s) > target;
                                   });
    s_end = st.t_end;
  }
  prof.r_far = std::exp(s_end);
  prof.U_far = L.U(y);
  prof.slope_far = L.P(y);
  prof.mass_far = L.S(y);
  prof.log_moment_far = L.T(y);
  // For s_end beyond ~709 the radius overflows; keep log r for tail formulas.
  if (!std::isfinite(prof.r_far)) prof.r_far = std::numeric_limits<double>::max();
  prof.log_r_far = s_end;
  return prof;
}

namespace {

int locate(const std::vector<double>& r, double x) {
  auto it = std::upper_bound(r.begin(), r.end(), x);
  int k = static_cast<int>(it - r.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(r.size()) - 2);
}

}  // namespace

double RadialProfile::value(int i, double radius) const {
  if (i < 0 || i >= n) throw InputError("component index out of range");
  if (radius < 0.0 || radius > r.back() * (1 + 1e-12)) throw InputError("radius outside profile");
  if (radius <= r_start) {
    const double r2 = radius * radius;
    return -alpha.alpha[i] - series_quadratic[i] * r2 + series_quartic[i] * r2 * r2;
  }
  const int k = locate(r, radius);
  const double r0 = r[k], r1 = r[k + 1];
  if (r1 <= 1.0) {
    return ode::hermite(r0, U(i, k), dU(i, k), r1, U(i, k + 1), dU(i, k + 1), radius);
  }
  return ode::hermite(std::log(r0), U(i, k), r0 * dU(i, k), std::log(r1), U(i, k + 1),
                      r1 * dU(i, k + 1), std::log(radius));
}

double RadialProfile::r_derivative(int i, double radius) const {
  if (i < 0 || i >= n) throw InputError("component index out of range");
  if (radius < 0.0 || radius > r.back() * (1 + 1e-12)) throw InputError("radius outside profile");
  if (radius <= r_start) {
    const double r2 = radius * radius;
    return -2.0 * series_quadratic[i] * r2 + 4.0 * series_quartic[i] * r2 * r2;
  }
  const int k = locate(r, radius);
  // d(rU')/ds = -r^2 sum_j a_ij e^{U_j}
  auto dP = [&](int kk) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += coupling(i, j) * std::exp(U(j, kk));
    return -r[kk] * r[kk] * acc;
  };
  const double s0 = std::log(r[k]), s1 = std::log(r[k + 1]);
  return ode::hermite(s0, r[k] * dU(i, k), dP(k), s1, r[k + 1] * dU(i, k + 1), dP(k + 1),
                      std::log(radius));
}

GlobalSolutionSummary summarize(const InteractionMatrix& a, const RadialProfile& p) {
  const int n = a.size();
  if (p.n != n) throw InputError("profile and matrix sizes differ");
  for (int i = 0; i < n; ++i)
    if (!(-p.slope_at_rmax[i] > 2.0)) throw PreconditionError("profile is not integrable");

  GlobalSolutionSummary s;
  s.alpha = p.alpha;
  s.sigma.resize(n);
  Vector T(n);
  const double L = p.log_r_far;
  for (int i = 0; i < n; ++i) {
    const double k = -p.slope_far[i] - 2.0;
    const double e = std::exp(p.U_far[i] + 2.0 * L);
    s.sigma[i] = p.mass_far[i] + e / k;
    T[i] = p.log_moment_far[i] + e * (L / k + 1.0 / (k * k));
  }
  s.m = a.a() * s.sigma;
  s.D = a.a() * T;
  s.m_min = s.m.minCoeff();
  s.m_from_slope = -p.slope_far;
  s.tail_residual = (p.slope_far + s.m).cwiseAbs().maxCoeff();
  if (s.tail_residual > 10.0 * p.tol) {
    std::ostringstream os;
    os << "tail residual " << s.tail_residual << " exceeds 10 tol; increase r_max";
    throw InconsistentTailError(os.str());
  }
  return s;
}

GlobalSolutionSummary solve_global(const InteractionMatrix& a, const HeightVector& alpha,
                                   const RadialOptions& opt) {
  return summarize(a, integrate(a, alpha, opt));
}

double GlobalSolutionSummary::pohozaev_defect() const {
  return std::abs(sigma.dot(m - Vector::Constant(m.size(), 4.0))) / sigma.sum();
}

double GlobalSolutionSummary::quadratic_pohozaev_defect(const InteractionMatrix& a) const {
  const Vector x = (m.array() - 2.0) / 2.0;
  const Matrix& B = a.inverse();
  return std::abs(x.dot(B * x) - B.sum());
}

bool GlobalSolutionSummary::satisfies_dichotomy(double tol) const {
  return m_min < 4.0 - tol || (m.array() - 4.0).abs().maxCoeff() < tol;
}

ExpansionReport expansion_residual(const InteractionMatrix& a, const GlobalSolutionSummary& s,
                                   const RadialProfile& p, double r_lo, double r_hi) {
  const int n = a.size();
  if (!(r_lo < r_hi) || r_lo < p.r_max / 100.0 * (1 - 1e-12) || r_hi > p.r_max * (1 + 1e-12))
    throw InputError("window must lie inside [r_max/100, r_max]");
  r_hi = std::min(r_hi, p.r_max);

  constexpr int kSamples = 241;
  std::vector<double> rs(kSamples);
  for (int k = 0; k < kSamples; ++k)
    rs[k] = std::exp(std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * k / (kSamples - 1));

  const Vector C = (s.D - s.alpha.alpha).array().exp();
  ExpansionReport rep;
  rep.r_lo = r_lo;
  rep.r_hi = r_hi;
  const double noise = 10.0 * p.tol;

  for (int i = 0; i < n; ++i) {
    ExpansionComponent c;
    c.expected_constant = s.D[i] - s.alpha.alpha[i];
    auto correction = [&](double r) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        if (a(i, j) != 0.0)
          acc -= a(i, j) * C[j] / ((s.m[j] - 2.0) * (s.m[j] - 2.0)) * std::pow(r, 2.0 - s.m[j]);
      return acc;
    };
    double mmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) mmin = std::min(mmin, s.m[j]);
    c.kept_exponent = 2.0 - mmin;

    std::vector<double> shifted(kSamples), res(kSamples);
    for (int k = 0; k < kSamples; ++k) {
      shifted[k] = p.value(i, rs[k]) + s.m[i] * std::log(rs[k]);
      res[k] = shifted[k] - c.expected_constant - correction(rs[k]);
      c.sup_residual = std::max(c.sup_residual, std::abs(res[k]));
    }
    c.correction_measured = shifted[0] - c.expected_constant;
    c.correction_model = correction(rs[0]);

    // Decay fit of |residual| above the integration noise floor.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int k = 0; k < kSamples; ++k) {
      if (std::abs(res[k]) <= noise) continue;
      const double x = std::log(rs[k]), yv = std::log(std::abs(res[k]));
      sx += x; sy += yv; sxx += x * x; sxy += x * yv;
      ++cnt;
    }
    c.decay_exponent = cnt >= 10 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx)
                                 : std::numeric_limits<double>::quiet_NaN();

    // Constant of the least-squares fit over {1, r^{2-m_j}}; exponents closer
    // than 1e-3 are merged and negligible ones dropped.
    std::vector<double> expo;
    for (int j = 0; j < n; ++j) {
      if (a(i, j) == 0.0) continue;
      const double ex = 2.0 - s.m[j];
      if (std::pow(r_lo, ex) < 1e-13) continue;
      bool dup = false;
      for (double q : expo) dup = dup || std::abs(q - ex) < 1e-3;
      if (!dup) expo.push_back(ex);
    }
    Matrix B(kSamples, 1 + static_cast<int>(expo.size()));
    Vector rhs(kSamples);
    for (int k = 0; k < kSamples; ++k) {
      B(k, 0) = 1.0;
      for (std::size_t q = 0; q < expo.size(); ++q) B(k, 1 + q) = std::pow(rs[k], expo[q]);
      rhs[k] = shifted[k];
    }
    c.fitted_constant = B.colPivHouseholderQr().solve(rhs)[0];
    rep.components.push_back(c);
  }
  return rep;
}

}  // namespace liouville
