#include "liouville/blowup_geometry.hpp"

#include "liouville/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace liouville {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_separation(const std::vector<TorusPoint>& pts, bool merge) {
  for (std::size_t s = 0; s < pts.size(); ++s)
    for (std::size_t t = s + 1; t < pts.size(); ++t)
      if (torus_distance(pts[s], pts[t]) < kMinSeparation) {
        std::ostringstream os;
        os << "points " << s + 1 << " and " << t + 1 << " are closer than " << kMinSeparation;
        if (merge) throw MergeError(os.str());
        throw ConfigurationError(os.str());
      }
}

double max_norm(const std::vector<Eigen::Vector2d>& r) {
  double m = 0.0;
  for (const auto& v : r) m = std::max(m, v.norm());
  return m;
}

}  // namespace

void BlowupConfiguration::validate() const {
  if (points.empty()) throw ConfigurationError("configuration needs at least one point");
  if (masses.size() == 0 || static_cast<int>(weights.size()) != n())
    throw ConfigurationError("need one weight per component");
  for (int i = 0; i < n(); ++i)
    if (!(masses[i] > 2.0)) throw ConfigurationError("every mass m_i must exceed 2");
  check_separation(points, false);
}

std::vector<int> minimal_mass_indices(const Vector& masses) {
  const double m = masses.minCoeff();
  std::vector<int> out;
  for (int i = 0; i < masses.size(); ++i)
    if (std::abs(masses[i] - m) < 1e-6 * m) out.push_back(i);
  return out;
}

std::vector<Eigen::Vector2d> location_residual(const BlowupConfiguration& config,
                                               const GreenEvaluator& green,
                                               const std::optional<Vector>& component_weights) {
  config.validate();
  if (component_weights && component_weights->size() != config.n())
    throw InputError("component weight vector has wrong length");
  std::vector<Eigen::Vector2d> out;
  for (int t = 0; t < config.N(); ++t) {
    const Eigen::Vector2d g = green.gstar_grad(config.points, t);
    Eigen::Vector2d r = Eigen::Vector2d::Zero();
    for (int i = 0; i < config.n(); ++i) {
      const double w = component_weights ? (*component_weights)[i] : 1.0;
      r += w * (config.weights[i].log_gradient(config.points[t]) + kTwoPi * config.masses[i] * g);
    }
    out.push_back(r);
  }
  return out;
}

LocationResult solve_locations(const std::vector<WeightFunction>& weights, const Vector& masses,
                               const std::vector<TorusPoint>& init, const GreenEvaluator& green,
                               const LocationOptions& opt) {
  check_separation(init, true);
  LocationResult res;
  res.config.points = init;
  res.config.masses = masses;
  res.config.weights = weights;
  res.config.validate();

  const int N = res.config.N();
  bool fix = opt.gauge == Gauge::fix_first;
  if (opt.gauge == Gauge::automatic)
    fix = std::all_of(weights.begin(), weights.end(), [](const auto& h) { return h.is_constant(); });
  res.gauge_fixed = fix;
  const int first = fix ? 1 : 0;
  const int dim = 2 * (N - first);

  auto residual_vec = [&](const std::vector<TorusPoint>& pts) {
    BlowupConfiguration c = res.config;
    c.points = pts;
    const auto r = location_residual(c, green);
    Vector v(dim);
    for (int t = first; t < N; ++t) v.segment<2>(2 * (t - first)) = r[t];
    return std::pair{v, max_norm(r)};
  };

  auto [F, err] = residual_vec(res.config.points);
  res.residual_trace.push_back(err);
  while (err >= opt.tol) {
    if (dim == 0) break;
    if (res.iterations >= opt.max_iter) {
      std::ostringstream os;
      os << "location Newton did not converge; residual trace:";
      for (double r : res.residual_trace) os << ' ' << r;
      throw NonconvergenceError(os.str());
    }
    ++res.iterations;
    Matrix J(dim, dim);
    for (int c = 0; c < dim; ++c) {
      auto pp = res.config.points, pm = res.config.points;
      const int t = first + c / 2, k = c % 2;
      pp[t][k] += opt.fd_step;
      pm[t][k] -= opt.fd_step;
      J.col(c) = (residual_vec(pp).first - residual_vec(pm).first) / (2.0 * opt.fd_step);
    }
    Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[dim - 1] <= 1e-10 * std::max(1.0, sv[0])) {
      std::ostringstream os;
      os << "location Jacobian is singular beyond the gauge (condition "
         << sv[0] / std::max(sv[dim - 1], 1e-300) << ")";
      throw DegenerateConfigurationError(os.str());
    }
    const Vector step = svd.solve(-F);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h, lambda *= 0.5) {
      auto trial = res.config.points;
      for (int t = first; t < N; ++t) trial[t] += lambda * step.segment<2>(2 * (t - first));
      for (auto& p : trial) p = wrap(p);
      check_separation(trial, true);
      auto [Ft, et] = residual_vec(trial);
      if (et < err) {
        res.config.points = trial;
        F = Ft;
        err = et;
        accepted = true;
        break;
      }
    }
    res.residual_trace.push_back(err);
    if (!accepted) {
      std::ostringstream os;
      os << "location Newton stalled at residual " << err;
      throw NonconvergenceError(os.str());
    }
  }
  return res;
}

CoefficientReport coefficient_report(const BlowupConfiguration& config, const GreenEvaluator& green) {
  config.validate();
  const int n = config.n(), N = config.N();
  const double m = config.m();
  CoefficientReport rep;
  rep.H.resize(n, N);
  Vector S(N);
  for (int t = 0; t < N; ++t) S[t] = green.gstar_sum(config.points, t);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < N; ++t)
      rep.H(i, t) = std::log(config.weights[i].value(config.points[t])) + kTwoPi * config.masses[i] * S[t];
  for (int i = 0; i < n; ++i)
    rep.compatibility_defect =
        std::max(rep.compatibility_defect, rep.H.row(i).maxCoeff() - rep.H.row(i).minCoeff());

  rep.I1 = minimal_mass_indices(config.masses);
  rep.c_by_component.resize(static_cast<int>(rep.I1.size()), N);
  for (std::size_t q = 0; q < rep.I1.size(); ++q) {
    const int i = rep.I1[q];
    const double base = std::log(config.weights[i].value(config.points[0])) + kTwoPi * m * S[0];
    for (int t = 0; t < N; ++t)
      rep.c_by_component(static_cast<int>(q), t) =
          std::exp(std::log(config.weights[i].value(config.points[t])) + kTwoPi * m * S[t] - base);
  }
  rep.c = rep.c_by_component.row(0).transpose();
  for (int q = 1; q < rep.c_by_component.rows(); ++q)
    for (int t = 0; t < N; ++t)
      rep.c_spread = std::max(rep.c_spread, std::abs(rep.c_by_component(q, t) - rep.c[t]) / rep.c[t]);
  rep.c_consistent = rep.c_spread <= 1e-6;
  rep.residuals = location_residual(config, green);
  return rep;
}

}  // namespace liouville
