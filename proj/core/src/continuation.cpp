#include "liouville/continuation.hpp"

#include "liouville/error.hpp"
#include "liouville/krylov.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace liouville {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::resolution: return "resolution";
    case StopReason::surface: return "surface";
    case StopReason::height: return "height";
    case StopReason::max_steps: return "max_steps";
    case StopReason::solver_failure: return "solver_failure";
  }
  return "unknown";
}

int ContinuationResult::exit_code() const {
  return reason == StopReason::resolution || reason == StopReason::surface || reason == StopReason::height ? 0 : 2;
}

namespace {

struct BranchPoint {
  FieldState s;
  double t = 0.0;
};

struct StepOutcome {
  BranchPoint point;
  double residual = 0.0;
  int iterations = 0;
};

double max_height(const FieldState& s) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& u : s.u) m = std::max(m, u.maxCoeff() - u.mean());
  return m;
}

// One pseudo-arclength step: predictor along the secant through prev and cur,
// then Newton on the bordered system [F(u, t); <tau, (u, t) - pred>] = 0. As in
// newton_solve the unknowns are the Laplacians of u; the constraint is in u.
StepOutcome arclength_step(const MeanFieldSystem& sys, const BranchPoint& prev, const BranchPoint& cur, double ds,
                           const Vector& rho0, const Vector& dir, const NewtonOptions& opt) {
  const long G = sys.grid().size();
  const long nG = sys.n() * G;
  const double scale = std::sqrt(double(G));

  Field tau_u = sys.stack(cur.s) - sys.stack(prev.s);
  Field tau_w = sys.stack_laplacian(cur.s) - sys.stack_laplacian(prev.s);
  double tau_t = cur.t - prev.t;
  const double len = std::sqrt(tau_u.squaredNorm() / G + tau_t * tau_t);
  if (!(len > 0.0)) throw NonconvergenceError("degenerate secant");
  tau_u /= len;
  tau_w /= len;
  tau_t /= len;

  Field w = sys.stack_laplacian(cur.s) + ds * tau_w;
  double t = cur.t + ds * tau_t;
  const Field u_pred = sys.stack(sys.from_laplacian(w));
  const double t_pred = t;

  struct Eval {
    FieldState s;
    MeanFieldSystem::Linearization lin;
    ResidualReport R;
    double c = 0.0;
  };
  auto evaluate = [&](const Field& ww, double tt) {
    Eval e;
    e.s = sys.from_laplacian(ww);
    e.lin = sys.linearize(e.s);
    e.R = sys.residual(e.lin, e.s, rho0 + tt * dir);
    e.c = tau_u.dot(sys.stack(e.s) - u_pred) / G + tau_t * (tt - t_pred);
    return e;
  };

  Eval cur_eval = evaluate(w, t);
  std::vector<double> trace{cur_eval.R.norm};
  int it = 0;
  Field v;
  while (cur_eval.R.norm >= opt.tol) {
    if (it >= opt.max_iter) {
      std::ostringstream os;
      os << "arclength corrector did not converge; residual trace:";
      for (double x : trace) os << ' ' << x;
      throw NonconvergenceError(os.str());
    }
    ++it;
    const Vector rho = rho0 + t * dir;
    const auto& lin = cur_eval.lin;
    const Field Ft = sys.parameter_derivative(lin, dir);
    const LinearOperator J = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
      Field head;
      sys.precondition(x.head(nG), v);
      sys.apply_jacobian(lin, rho, v, head);
      y.resize(nG + 1);
      y.head(nG) = head + x[nG] * Ft;
      y[nG] = scale * (tau_u.dot(v) / G + tau_t * x[nG]);
    };
    Eigen::VectorXd rhs(nG + 1);
    for (int i = 0; i < sys.n(); ++i) rhs.segment(i * G, G) = -cur_eval.R.F[i];
    rhs[nG] = -scale * cur_eval.c;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(nG + 1);
    GmresOptions go;
    go.rel_tol = opt.gmres_tol;
    go.abs_tol = 0.1 * opt.tol * scale;
    go.max_iter = opt.gmres_max;
    const auto gr = gmres(J, {}, rhs, delta, go);
    if (!gr.converged && gr.residual > 0.5 * rhs.norm()) throw NonconvergenceError("bordered linear solve failed");

    const double merit = std::hypot(cur_eval.R.norm, cur_eval.c);
    bool accepted = false;
    double alpha = 1.0;
    for (int k = 0; k < 12; ++k, alpha *= 0.5) {
      Field ww = w + alpha * delta.head(nG);
      const double tt = t + alpha * delta[nG];
      try {
        Eval e = evaluate(ww, tt);
        if (std::isfinite(e.R.norm) && std::hypot(e.R.norm, e.c) < merit) {
          w = std::move(ww);
          t = tt;
          cur_eval = std::move(e);
          accepted = true;
          break;
        }
      } catch (const AmplitudeError&) {
      }
    }
    trace.push_back(cur_eval.R.norm);
    if (!accepted) throw NonconvergenceError("arclength line search failed");
  }
  return {{std::move(cur_eval.s), t}, cur_eval.R.norm, it};
}

}  // namespace

ContinuationResult continue_ray(const InteractionMatrix& a, const std::vector<WeightFunction>& weights,
                                const Vector& rho_start, const Vector& direction,
                                const ContinuationControls& controls, const RecordCallback& on_record,
                                const std::optional<BranchSeed>& seed) {
  const int n = a.size();
  if (rho_start.size() != n || direction.size() != n) throw InputError("rho_start and direction need n entries");
  if (!(direction.minCoeff() > 0.0)) throw InputError("direction must have all positive components");
  ParameterPoint{rho_start, controls.level}.validate();
  if (controls.resolution_max < controls.resolution_start) throw InputError("resolution_max below resolution_start");
  if (!(controls.step_min > 0.0) || controls.step_init < controls.step_min)
    throw InputError("step sizes must satisfy 0 < step_min <= step_init");
  if (seed && seed->t_previous == seed->t_current) throw InputError("seed points share the same ray parameter");

  ContinuationResult out;
  int M = controls.resolution_start;
  if (seed) M = std::max(M, seed->current.M);
  auto sys = std::make_unique<MeanFieldSystem>(a, weights, M);
  NewtonOptions nopt;
  nopt.tol = controls.tol;
  auto rho_of = [&](double t) -> Vector { return rho_start + t * direction; };

  auto push_record = [&](const BranchPoint& p, double residual, int step, bool arclength) {
    ContinuationRecord rec = measure(*sys, p.s, rho_of(p.t), controls.delta0, controls.level);
    rec.step = step;
    rec.residual_norm = residual;
    rec.arclength = arclength;
    if (on_record) on_record(rec);
    out.records.push_back(std::move(rec));
  };

  BranchPoint cur;
  std::optional<BranchPoint> prev;
  bool arclength = false;
  double h = controls.step_init;
  double ds = 0.0;
  try {
    if (seed) {
      auto fit = [&](const FieldState& s) { return s.M == M ? s : sys->resample(s, M); };
      auto p = sys->newton_solve(fit(seed->previous), rho_of(seed->t_previous), nopt);
      auto c = sys->newton_solve(fit(seed->current), rho_of(seed->t_current), nopt);
      prev = BranchPoint{std::move(p.state), seed->t_previous};
      cur = {std::move(c.state), seed->t_current};
      arclength = true;
      ds = std::sqrt((sys->stack(cur.s) - sys->stack(prev->s)).squaredNorm() / sys->grid().size() +
                     (cur.t - prev->t) * (cur.t - prev->t));
      push_record(cur, c.residual, 0, true);
    } else {
      auto first = sys->newton_solve(sys->zero_state(), rho_of(0.0), nopt);
      cur = {std::move(first.state), 0.0};
      push_record(cur, first.residual, 0, false);
    }
  } catch (const Error& e) {
    out.reason = StopReason::solver_failure;
    out.message = std::string("initial solve failed: ") + e.what();
    return out;
  }
  const double lambda0 = out.records.back().lambda_measured;
  int last_sign = prev && cur.t < prev->t ? -1 : 1;

  for (int step = 1;; ++step) {
    if (step > controls.max_steps) {
      out.reason = StopReason::max_steps;
      out.message = "step limit reached";
      break;
    }
    std::optional<StepOutcome> next;
    std::string failure;
    int failures = 0;
    while (!next) {
      try {
        StepOutcome o;
        if (!arclength) {
          FieldState guess = cur.s;
          if (prev && cur.t != prev->t) {
            const double w = h / (cur.t - prev->t);
            const Field wc = sys->stack_laplacian(cur.s);
            guess = sys->from_laplacian(wc + w * (wc - sys->stack_laplacian(prev->s)));
          }
          auto nr = sys->newton_solve(guess, rho_of(cur.t + h), nopt);
          o = {{std::move(nr.state), cur.t + h}, nr.residual, nr.iterations};
        } else {
          o = arclength_step(*sys, *prev, cur, ds, rho_start, direction, nopt);
        }
        if (std::abs(max_height(o.point.s) - max_height(cur.s)) > controls.max_height_step)
          throw NonconvergenceError("height change per step above max_height_step");
        next = std::move(o);
      } catch (const Error& e) {
        if (e.kind() != "nonconvergence" && e.kind() != "amplitude") throw;
        failure = e.what();
        ++failures;
        if (failures > controls.max_retries) break;
        if (!arclength) {
          // Two consecutive failures of the natural step are taken as a fold signal.
          if (failures >= 2 && prev) {
            arclength = true;
            const double len = std::sqrt((sys->stack(cur.s) - sys->stack(prev->s)).squaredNorm() / sys->grid().size() +
                                         (cur.t - prev->t) * (cur.t - prev->t));
            ds = 0.5 * len;
          } else {
            h *= 0.5;
          }
        } else {
          ds *= 0.5;
        }
        if ((!arclength && h < controls.step_min) || (arclength && ds < controls.step_min)) break;
      }
    }
    if (!next) {
      out.reason = StopReason::solver_failure;
      out.message = "step failed after retries: " + failure;
      break;
    }

    const int sign = next->point.t >= cur.t ? 1 : -1;
    if (sign != last_sign) out.fold_steps.push_back(step);
    last_sign = sign;

    prev = std::move(cur);
    cur = std::move(next->point);
    try {
      push_record(cur, next->residual, step, arclength);
    } catch (const Error& e) {
      out.reason = StopReason::solver_failure;
      out.message = std::string("measurement failed: ") + e.what();
      break;
    }

    if (next->iterations <= 4) {
      h = std::min(1.5 * h, controls.step_max);
      ds = std::min(1.5 * ds, controls.step_max);
    } else if (next->iterations >= 10) {
      h *= 0.7;
      ds *= 0.7;
    }

    const auto& rec = out.records.back();
    if (controls.stop_at_surface && rec.lambda_measured * lambda0 <= 0.0) {
      out.reason = StopReason::surface;
      out.message = "crossed the critical surface";
      break;
    }
    if (rec.max_theta >= controls.stop_height) {
      out.reason = StopReason::height;
      out.message = "reached the target height";
      break;
    }
    const double eps = std::exp(-0.5 * rec.max_theta);
    if (eps < controls.cells_per_core / M) {
      if (2 * M > controls.resolution_max) {
        out.reason = StopReason::resolution;
        out.message = "bubble width below the resolution limit at M=" + std::to_string(M);
        break;
      }
      auto fine = std::make_unique<MeanFieldSystem>(a, weights, 2 * M);
      BranchPoint prev_fine{fine->resample(prev->s, 2 * M), prev->t};
      BranchPoint cur_fine{fine->resample(cur.s, 2 * M), cur.t};
      try {
        if (arclength) {
          // Corrector with zero step: stays on the hyperplane through the
          // interpolated point, which is well posed at folds.
          auto o = arclength_step(*fine, prev_fine, cur_fine, 0.0, rho_start, direction, nopt);
          cur = std::move(o.point);
        } else {
          auto nr = fine->newton_solve(cur_fine.s, rho_of(cur.t), nopt);
          cur.s = std::move(nr.state);
        }
      } catch (const Error& e) {
        out.reason = StopReason::solver_failure;
        out.message = std::string("re-solve after refinement failed: ") + e.what();
        break;
      }
      prev = std::move(prev_fine);
      sys = std::move(fine);
      M *= 2;
    }
  }
  out.final_state = cur.s;
  if (prev) out.tail = BranchSeed{prev->s, cur.s, prev->t, cur.t};
  return out;
}

void write_continuation_csv(std::ostream& os, const std::vector<ContinuationRecord>& records) {
  int n = 0, Nmax = 0;
  for (const auto& r : records) {
    n = std::max(n, static_cast<int>(r.rho.size()));
    Nmax = std::max(Nmax, r.N());
  }
  os << "step";
  for (int i = 0; i < n; ++i) os << ",rho_" << i + 1;
  os << ",lambda_I,N_detected";
  for (int t = 0; t < Nmax; ++t) os << ",M_k" << t + 1;
  for (int t = 0; t < Nmax; ++t) os << ",eps_k" << t + 1;
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < Nmax; ++t) os << ",rho_" << i + 1 << t + 1;
  os << ",residual\n";
  os << std::setprecision(17);
  for (const auto& r : records) {
    os << r.step;
    for (int i = 0; i < n; ++i) os << ',' << r.rho[i];
    os << ',' << r.lambda_measured << ',' << r.N();
    for (int t = 0; t < Nmax; ++t) {
      os << ',';
      if (t < r.N()) os << r.M_kt[t];
    }
    for (int t = 0; t < Nmax; ++t) {
      os << ',';
      if (t < r.N()) os << r.eps_kt[t];
    }
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < Nmax; ++t) {
        os << ',';
        if (t < r.N()) os << r.rho_it(i, t);
      }
    os << ',' << r.residual_norm << '\n';
  }
}

}  // namespace liouville
