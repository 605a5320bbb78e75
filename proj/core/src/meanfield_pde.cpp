#include "liouville/meanfield_pde.hpp"

#include "liouville/error.hpp"
#include "liouville/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace liouville {

MeanFieldSystem::MeanFieldSystem(InteractionMatrix a, std::vector<WeightFunction> weights, int M)
    : a_(std::move(a)), weights_(std::move(weights)), grid_(M) {
  if (static_cast<int>(weights_.size()) != a_.size()) throw InputError("need one weight per component");
  if (M < 64) throw InputError("grid resolution must be at least 64");
  for (const auto& w : weights_) {
    h_.push_back(grid_.sample([&](const TorusPoint& x) { return w.value(x); }));
    if (!(h_.back().minCoeff() >= 0.0)) throw InputError("weights must be nonnegative on the grid");
  }
}

MeanFieldSystem::Linearization MeanFieldSystem::linearize(const FieldState& s) const {
  if (s.n() != n() || s.M != M()) throw InputError("state does not match the system");
  Linearization lin;
  lin.Z.resize(n());
  for (int j = 0; j < n(); ++j) {
    const Field& u = s.u[j];
    if (!u.allFinite()) throw AmplitudeError("non-finite field; reduce the continuation step");
    const double mx = u.maxCoeff();
    Field E = h_[j].array() * (u.array() - mx).exp();
    lin.Z[j] = E.mean();
    if (!(lin.Z[j] > 0.0) || !std::isfinite(lin.Z[j]))
      throw AmplitudeError("exponential normalization under/overflowed");
    lin.PE.push_back(grid_.dealias(E));
    lin.E.push_back(std::move(E));
  }
  return lin;
}

ResidualReport MeanFieldSystem::residual(const FieldState& s, const Vector& rho) const {
  return residual(linearize(s), s, rho);
}

ResidualReport MeanFieldSystem::residual(const Linearization& lin, const FieldState& s, const Vector& rho) const {
  if (rho.size() != n()) throw InputError("rho has wrong length");
  std::vector<Field> T(n());
  for (int j = 0; j < n(); ++j) T[j] = rho[j] * (lin.PE[j] / lin.Z[j]).array() - rho[j];
  ResidualReport r;
  double acc = 0.0;
  const bool have_lap = static_cast<int>(s.lap.size()) == n();
  for (int i = 0; i < n(); ++i) {
    Field F = have_lap ? s.lap[i] : grid_.laplacian(s.u[i]);
    for (int j = 0; j < n(); ++j)
      if (a_(i, j) != 0.0) F += a_(i, j) * T[j];
    acc += F.squaredNorm() / F.size();
    r.F.push_back(std::move(F));
  }
  r.norm = std::sqrt(acc);
  return r;
}

void MeanFieldSystem::apply_jacobian(const Linearization& lin, const Vector& rho, const Field& v, Field& out) const {
  const int G = grid_.size();
  std::vector<Field> D(n());
  for (int j = 0; j < n(); ++j) {
    const Field w = lin.E[j].cwiseProduct(v.segment(j * G, G));
    const double mw = w.mean();
    D[j] = rho[j] * (grid_.dealias(w) / lin.Z[j] - lin.PE[j] * (mw / (lin.Z[j] * lin.Z[j])));
  }
  out.resize(n() * G);
  for (int i = 0; i < n(); ++i) {
    Field o = grid_.laplacian(v.segment(i * G, G));
    for (int j = 0; j < n(); ++j)
      if (a_(i, j) != 0.0) o += a_(i, j) * D[j];
    out.segment(i * G, G) = o;
  }
}

Field MeanFieldSystem::parameter_derivative(const Linearization& lin, const Vector& direction) const {
  const int G = grid_.size();
  Field out = Field::Zero(n() * G);
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (a_(i, j) != 0.0)
        out.segment(i * G, G) += a_(i, j) * direction[j] * ((lin.PE[j] / lin.Z[j]).array() - 1.0).matrix();
  return out;
}

void MeanFieldSystem::precondition(const Field& v, Field& out) const {
  const int G = grid_.size();
  out.resize(v.size());
  for (int i = 0; i < n(); ++i) out.segment(i * G, G) = grid_.inverse_laplacian(v.segment(i * G, G));
  for (long k = n() * G; k < v.size(); ++k) out[k] = v[k];
}

Field MeanFieldSystem::stack(const FieldState& s) const {
  const int G = grid_.size();
  Field v(n() * G);
  for (int i = 0; i < n(); ++i) v.segment(i * G, G) = s.u[i];
  return v;
}

FieldState MeanFieldSystem::unstack(const Field& v) const {
  const int G = grid_.size();
  FieldState s{M(), {}, false, {}};
  for (int i = 0; i < n(); ++i) s.u.emplace_back(v.segment(i * G, G));
  return s;
}

Field MeanFieldSystem::stack_laplacian(const FieldState& s) const {
  const int G = grid_.size();
  Field v(n() * G);
  const bool have_lap = static_cast<int>(s.lap.size()) == n();
  for (int i = 0; i < n(); ++i) v.segment(i * G, G) = have_lap ? s.lap[i] : grid_.laplacian(s.u[i]);
  return v;
}

FieldState MeanFieldSystem::from_laplacian(const Field& w) const {
  const int G = grid_.size();
  FieldState s{M(), {}, false, {}};
  for (int i = 0; i < n(); ++i) {
    Field wi = w.segment(i * G, G);
    wi.array() -= wi.mean();
    s.u.push_back(grid_.inverse_laplacian(wi));
    s.lap.push_back(std::move(wi));
  }
  return s;
}

FieldState MeanFieldSystem::zero_state() const {
  return FieldState{M(), std::vector<Field>(n(), Field::Zero(grid_.size())), false,
                    std::vector<Field>(n(), Field::Zero(grid_.size()))};
}

void MeanFieldSystem::project(FieldState& s) const {
  for (auto& u : s.u) u.array() -= u.mean();
  for (auto& w : s.lap) w.array() -= w.mean();
  s.normalized = false;
}

NewtonResult MeanFieldSystem::newton_solve(const FieldState& s0, const Vector& rho, const NewtonOptions& opt) const {
  if (s0.n() != n() || s0.M != M()) throw InputError("state does not match the system");
  NewtonResult res;
  Field w = stack_laplacian(s0);
  res.state = from_laplacian(w);
  auto lin = linearize(res.state);
  auto R = residual(lin, res.state, rho);
  if (!std::isfinite(R.norm)) throw AmplitudeError("initial residual is not finite");
  res.trace.push_back(R.norm);

  // J Delta^{-1}: the Jacobian in the Laplacian variables.
  Field tmp;
  const LinearOperator JP = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    precondition(x, tmp);
    apply_jacobian(lin, rho, tmp, y);
  };

  while (R.norm >= opt.tol) {
    if (res.iterations >= opt.max_iter) {
      std::ostringstream os;
      os << "Newton did not converge in " << opt.max_iter << " iterations; residual trace:";
      for (double t : res.trace) os << ' ' << t;
      throw NonconvergenceError(os.str());
    }
    ++res.iterations;
    Field rhs(n() * grid_.size());
    for (int i = 0; i < n(); ++i) rhs.segment(i * grid_.size(), grid_.size()) = -R.F[i];
    Field delta = Field::Zero(rhs.size());
    GmresOptions go;
    go.rel_tol = opt.gmres_tol;
    go.abs_tol = 0.1 * opt.tol * std::sqrt(double(grid_.size()));
    go.max_iter = opt.gmres_max;
    const auto gr = gmres(JP, {}, rhs, delta, go);
    res.linear_iterations += gr.iterations;
    if (!gr.converged && gr.residual > 0.5 * rhs.norm()) {
      std::ostringstream os;
      os << "linear solve failed (near-singular Jacobian); relative residual " << gr.residual / rhs.norm();
      throw NonconvergenceError(os.str());
    }
    bool accepted = false;
    double alpha = 1.0;
    for (int h = 0; h < 12; ++h, alpha *= 0.5) {
      Field wt = w + alpha * delta;
      FieldState trial = from_laplacian(wt);
      try {
        auto tl = linearize(trial);
        auto tr = residual(tl, trial, rho);
        if (std::isfinite(tr.norm) && tr.norm < R.norm) {
          w = std::move(wt);
          res.state = std::move(trial);
          lin = std::move(tl);
          R = std::move(tr);
          accepted = true;
          break;
        }
      } catch (const AmplitudeError&) {
      }
    }
    res.trace.push_back(R.norm);
    if (!accepted) {
      std::ostringstream os;
      os << "Newton line search failed at residual " << R.norm;
      throw NonconvergenceError(os.str());
    }
  }
  res.residual = R.norm;
  return res;
}

FieldState MeanFieldSystem::normalize(const FieldState& s) const {
  FieldState out = s;
  for (int i = 0; i < n(); ++i) {
    const double mx = s.u[i].maxCoeff();
    const double logZ = mx + std::log((h_[i].array() * (s.u[i].array() - mx).exp()).mean());
    out.u[i].array() -= logZ;
  }
  out.normalized = true;
  return out;
}

FieldState MeanFieldSystem::resample(const FieldState& s, int M_new) const {
  FieldState out{M_new, {}, false, {}};
  TorusGrid g(s.M);
  for (const auto& u : s.u) out.u.push_back(g.resample(u, M_new));
  for (const auto& w : s.lap) out.lap.push_back(g.resample(w, M_new));
  return out;
}

std::vector<Peak> detect_peaks(const TorusGrid& grid, const Field& phi, double min_prominence) {
  const int M = grid.M(), G = grid.size();
  std::vector<int> order(G);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return phi[a] > phi[b] || (phi[a] == phi[b] && a < b); });

  std::vector<int> parent(G, -1), top(G, -1);
  std::vector<double> prominence(G, -1.0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int c : order) {
    const int a = c / M, b = c % M;
    int best = -1;
    int roots[8];
    int nr = 0;
    for (int da = -1; da <= 1; ++da)
      for (int db = -1; db <= 1; ++db) {
        if (da == 0 && db == 0) continue;
        const int nb = ((a + da + M) % M) * M + (b + db + M) % M;
        if (parent[nb] < 0) continue;
        const int r = find(nb);
        if (std::find(roots, roots + nr, r) != roots + nr) continue;
        roots[nr++] = r;
        if (best < 0 || phi[top[r]] > phi[top[best]]) best = r;
      }
    if (best < 0) {
      parent[c] = c;
      top[c] = c;
      continue;
    }
    for (int q = 0; q < nr; ++q) {
      const int r = roots[q];
      if (r == best) continue;
      prominence[top[r]] = phi[top[r]] - phi[c];
      parent[r] = best;
    }
    parent[c] = best;
  }
  const int gmax = order.front(), gmin = order.back();
  prominence[gmax] = phi[gmax] - phi[gmin];

  std::vector<Peak> peaks;
  for (int k = 0; k < G; ++k)
    if (prominence[k] >= min_prominence) peaks.push_back({k, phi[k], prominence[k]});
  std::sort(peaks.begin(), peaks.end(), [](const Peak& x, const Peak& y) { return x.height > y.height; });
  return peaks;
}

ContinuationRecord measure(const MeanFieldSystem& sys, const FieldState& s, const Vector& rho, double delta0,
                           int level) {
  const TorusGrid& grid = sys.grid();
  if (delta0 < 4.0 * grid.spacing()) throw InputError("delta0 must be at least 4 grid spacings");
  const int n = sys.n(), G = grid.size();
  const FieldState theta = s.normalized ? s : sys.normalize(s);

  ContinuationRecord rec;
  rec.resolution = grid.M();
  rec.rho = rho;
  rec.lambda_measured = lambda_full(sys.matrix(), ParameterPoint{rho, level});
  Field phi = theta.u[0];
  for (int i = 1; i < n; ++i) phi = phi.cwiseMax(theta.u[i]);
  rec.max_theta = phi.maxCoeff();
  rec.max_u = -std::numeric_limits<double>::infinity();
  for (const auto& u : s.u) rec.max_u = std::max(rec.max_u, u.maxCoeff() - u.mean());

  const auto peaks = detect_peaks(grid, phi, kBubbleProminence);
  for (const auto& p : peaks) rec.bubble_points.push_back(grid.point(p.index));
  const int N = static_cast<int>(peaks.size());
  for (int t = 0; t < N; ++t)
    for (int q = t + 1; q < N; ++q)
      if (torus_distance(rec.bubble_points[t], rec.bubble_points[q]) <= 2.0 * delta0) {
        std::ostringstream os;
        os << "bubbles " << t + 1 << " and " << q + 1 << " are closer than 2 delta0";
        throw SeparationError(os.str());
      }

  // Disk membership per grid node (-1 = background).
  std::vector<int> owner(G, -1);
  for (int k = 0; k < G; ++k)
    for (int t = 0; t < N; ++t)
      if (torus_distance(grid.point(k), rec.bubble_points[t]) <= delta0) owner[k] = t;

  rec.M_kt.assign(N, -std::numeric_limits<double>::infinity());
  rec.rho_it = Matrix::Zero(n, N);
  rec.sigma_unweighted = Matrix::Zero(n, N);
  rec.rho_ib = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const Field& h = sys.weight_samples(i);
    Vector acc = Vector::Zero(N);
    Vector plain = Vector::Zero(N);
    double bg = 0.0;
    for (int k = 0; k < G; ++k) {
      const double e = std::exp(theta.u[i][k]);
      const int t = owner[k];
      if (t < 0) {
        bg += h[k] * e;
      } else {
        acc[t] += h[k] * e;
        plain[t] += e;
        rec.M_kt[t] = std::max(rec.M_kt[t], theta.u[i][k]);
      }
    }
    rec.rho_it.row(i) = rho[i] * acc.transpose() / G;
    rec.sigma_unweighted.row(i) = plain.transpose() / G;
    rec.rho_ib[i] = rho[i] * bg / G;
  }
  rec.local_masses = rec.rho_it / (2.0 * std::numbers::pi);
  for (double M : rec.M_kt) rec.eps_kt.push_back(std::exp(-0.5 * M));
  for (int t = 0; t < N; ++t)
    for (int q = 0; q < N; ++q) {
      rec.height_spread = std::max(rec.height_spread, std::abs(rec.M_kt[t] - rec.M_kt[q]));
      for (int i = 0; i < n; ++i)
        rec.mass_spread = std::max(rec.mass_spread, std::abs(rec.rho_it(i, t) - rec.rho_it(i, q)));
    }
  return rec;
}

}  // namespace liouville
