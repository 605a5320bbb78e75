#include "liouville/leading_terms.hpp"

#include "liouville/error.hpp"
#include "liouville/parallel.hpp"
#include "liouville/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;

using Polygon = std::vector<Eigen::Vector2d>;

// Keeps the part of a convex polygon with v.y <= |v|^2 / 2.
Polygon clip(const Polygon& poly, const Eigen::Vector2d& v) {
  const double c = 0.5 * v.squaredNorm();
  auto inside = [&](const Eigen::Vector2d& y) { return v.dot(y) <= c; };
  Polygon out;
  const std::size_t k = poly.size();
  for (std::size_t a = 0; a < k; ++a) {
    const Eigen::Vector2d& P = poly[a];
    const Eigen::Vector2d& Q = poly[(a + 1) % k];
    const bool ip = inside(P), iq = inside(Q);
    if (ip) out.push_back(P);
    if (ip != iq) {
      const double s = (c - v.dot(P)) / v.dot(Q - P);
      out.push_back(P + s * (Q - P));
    }
  }
  return out;
}

struct Edge {
  double theta_a, theta_b;  // theta_b > theta_a
  Eigen::Vector2d normal;   // outward unit normal
  double distance;          // from the centre
};

std::vector<Edge> edges_of(const VoronoiCell& cell) {
  std::vector<Edge> e;
  const auto& V = cell.vertices;
  for (std::size_t a = 0; a < V.size(); ++a) {
    const Eigen::Vector2d& P = V[a];
    const Eigen::Vector2d& Q = V[(a + 1) % V.size()];
    const Eigen::Vector2d d = Q - P;
    if (d.norm() < 1e-15) continue;
    Edge ed;
    ed.normal = Eigen::Vector2d(d[1], -d[0]).normalized();
    ed.distance = ed.normal.dot(P);
    ed.theta_a = std::atan2(P[1], P[0]);
    ed.theta_b = std::atan2(Q[1], Q[0]);
    while (ed.theta_b <= ed.theta_a) ed.theta_b += 2.0 * kPi;
    e.push_back(ed);
  }
  return e;
}

// int_{cell \ B(rho)} r^{-m} (1 + f) dA in polar coordinates, per edge.
double outer_integral(const VoronoiCell& cell, double m, double rho, const CellDensity& d, int order) {
  const auto& rule = gauss_legendre(order);
  double total = 0.0;
  for (const Edge& e : edges_of(cell)) {
    constexpr int kSub = 4;
    const double dth = (e.theta_b - e.theta_a) / kSub;
    for (int s = 0; s < kSub; ++s) {
      total += integrate_panel(rule, e.theta_a + s * dth, e.theta_a + (s + 1) * dth, [&](double th) {
        const Eigen::Vector2d dir(std::cos(th), std::sin(th));
        const double R = e.distance / e.normal.dot(dir);
        double acc = 0.0;
        for (double lo = rho; lo < R;) {
          const double hi = std::min(2.0 * lo, R);
          acc += integrate_panel(rule, lo, hi, [&](double r) {
            return std::pow(r, 1.0 - m) * (1.0 + d.f_minus_one(r * dir));
          });
          lo = hi;
        }
        return acc;
      });
    }
  }
  return total;
}

double angular_mean(double r, const CellDensity& d, int npts) {
  double s = 0.0;
  for (int j = 0; j < npts; ++j) {
    const double th = 2.0 * kPi * j / npts;
    s += d.f_minus_one(Eigen::Vector2d(r * std::cos(th), r * std::sin(th)));
  }
  return s / npts;
}

// int_a^b 2 pi r^{1-m} mean_theta(f) dr for 0 <= a < b <= r0, with the
// Taylor model a2 r^2 + a4 r^4 below r0 / 2^levels.
double annulus_integral(double m, double a, double r0, const CellDensity& d, const BracketOptions& opt,
                        int order) {
  const auto& rule = gauss_legendre(order);
  const double rc = r0 / std::ldexp(1.0, opt.taylor_levels);
  double total = 0.0;
  for (double hi = r0; hi > std::max(a, rc) * (1 + 1e-14);) {
    const double lo = std::max(0.5 * hi, std::max(a, rc));
    total += integrate_panel(rule, lo, hi, [&](double r) {
      return 2.0 * kPi * std::pow(r, 1.0 - m) * angular_mean(r, d, opt.angular_points);
    });
    hi = lo;
  }
  if (a < rc) {
    const double a2 = d.quadratic_coefficient;
    const double a4 = (angular_mean(rc, d, opt.angular_points) - a2 * rc * rc) / std::pow(rc, 4);
    const double lo4 = a > 0.0 ? std::pow(a, 4.0 - m) : 0.0;
    const double lo6 = a > 0.0 ? std::pow(a, 6.0 - m) : 0.0;
    total += 2.0 * kPi *
             (a2 * (std::pow(rc, 4.0 - m) - lo4) / (4.0 - m) + a4 * (std::pow(rc, 6.0 - m) - lo6) / (6.0 - m));
  }
  return total;
}

double bracket_at_order(const VoronoiCell& cell, double m, double delta0, const CellDensity& d,
                        const BracketOptions& opt, int order) {
  const double r0 = cell.subtraction_radius();
  const double k = (m - 2.0) / (2.0 * kPi);
  if (delta0 >= r0) return std::pow(delta0, 2.0 - m) - k * outer_integral(cell, m, delta0, d, order);
  return std::pow(r0, 2.0 - m) -
         k * (annulus_integral(m, delta0, r0, d, opt, order) + outer_integral(cell, m, r0, d, order));
}

int companion_order(int order) { return order == 15 ? 10 : 15; }

void check_cell_radius(const VoronoiCell& cell, double delta0) {
  if (!(delta0 >= 0.0) || delta0 >= cell.inradius()) {
    std::ostringstream os;
    os << "excision radius " << delta0 << " does not fit inside the cell (inradius " << cell.inradius() << ")";
    throw ConfigurationError(os.str());
  }
}

}  // namespace

double VoronoiCell::area() const {
  double a = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& P = vertices[k];
    const auto& Q = vertices[(k + 1) % vertices.size()];
    a += P[0] * Q[1] - P[1] * Q[0];
  }
  return 0.5 * a;
}

double VoronoiCell::inradius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_of(*this)) r = std::min(r, e.distance);
  return r;
}

std::string PartitionCells::description() const {
  std::ostringstream os;
  os << "Voronoi cells of " << cells.size() << " point(s) over all periodic images; r0 =";
  for (const auto& c : cells) os << ' ' << c.subtraction_radius();
  return os.str();
}

PartitionCells voronoi_cells(const std::vector<TorusPoint>& points) {
  PartitionCells pc;
  for (std::size_t t = 0; t < points.size(); ++t) {
    VoronoiCell cell;
    cell.center = wrap(points[t]);
    cell.vertices = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    for (std::size_t l = 0; l < points.size(); ++l) {
      if (l == t) continue;
      const Eigen::Vector2d base = displacement(points[l], points[t]);
      if (base.norm() < kMinSeparation) throw ConfigurationError("points too close for a Voronoi partition");
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) cell.vertices = clip(cell.vertices, base + Eigen::Vector2d(a, b));
    }
    pc.cells.push_back(cell);
  }
  return pc;
}

double bracket_for_density(const VoronoiCell& cell, double m, double delta0, const CellDensity& d,
                           const BracketOptions& opt) {
  if (!(m > 2.0 && m < 4.0)) throw RegimeError("bracket requires 2 < m < 4");
  check_cell_radius(cell, delta0);
  const double v = bracket_at_order(cell, m, delta0, d, opt, opt.order);
  const double w = bracket_at_order(cell, m, delta0, d, opt, companion_order(opt.order));
  if (std::abs(v - w) > opt.resolution_tol * std::max(1.0, std::abs(v))) {
    std::ostringstream os;
    os << "bracket quadrature not resolved: orders " << opt.order << " and " << companion_order(opt.order)
       << " differ by " << std::abs(v - w);
    throw ResolutionError(os.str());
  }
  return v;
}

double raw_cell_integral(const VoronoiCell& cell, double m, double delta0, const CellDensity& d,
                         const BracketOptions& opt) {
  if (!(delta0 > 0.0)) throw InputError("raw integral needs delta0 > 0");
  check_cell_radius(cell, delta0);
  return outer_integral(cell, m, delta0, d, opt.order);
}

CellDensity bracket_density(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t) {
  config.validate();
  const int N = config.N();
  if (i < 0 || i >= config.n() || t < 0 || t >= N) throw InputError("bracket index out of range");
  const double m = config.m();
  const TorusPoint p = config.points[t];
  const WeightFunction& h = config.weights[i];
  const double log_hp = std::log(h.value(p));
  std::vector<double> Gp(N, 0.0);
  for (int l = 0; l < N; ++l)
    if (l != t) Gp[l] = green.green(p, config.points[l]);
  const double robin = green.robin();
  const auto pts = config.points;

  CellDensity d;
  d.f_minus_one = [=, &green](const Eigen::Vector2d& y) {
    const TorusPoint x = p + y;
    double s = green.regular_part(x, p) - robin;
    for (int l = 0; l < N; ++l)
      if (l != t) s += green.green(x, pts[l]) - Gp[l];
    return std::expm1(std::log(h.value(x)) - log_hp + 2.0 * kPi * m * s);
  };
  const double hp = h.value(p);
  const Eigen::Vector2d gh = h.gradient(p) / hp;
  const Eigen::Vector2d gL = gh + 2.0 * kPi * m * green.gstar_grad(config.points, t);
  const double lapL = h.laplacian(p) / hp - gh.squaredNorm() + 2.0 * kPi * m * N;
  d.quadratic_coefficient = 0.25 * (lapL + gL.squaredNorm());
  return d;
}

namespace {

double checked_m(const BlowupConfiguration& config) {
  const double m = config.m();
  if (!(m < 4.0 - 1e-3)) throw RegimeError("m >= 4 - 1e-3; use b_coefficients");
  return m;
}

}  // namespace

double regularized_bracket(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t,
                           double delta0, const BracketOptions& opt) {
  const double m = checked_m(config);
  if (!(delta0 >= 1e-3 && delta0 <= 0.1)) throw InputError("delta0 must lie in [1e-3, 0.1]");
  const auto cells = voronoi_cells(config.points);
  return bracket_for_density(cells.cells[t], m, delta0, bracket_density(config, green, i, t), opt);
}

double bracket_limit(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t,
                     const BracketOptions& opt) {
  const double m = checked_m(config);
  const auto cells = voronoi_cells(config.points);
  return bracket_for_density(cells.cells[t], m, 0.0, bracket_density(config, green, i, t), opt);
}

double bracket_extrapolated(const BlowupConfiguration& config, const GreenEvaluator& green, int i, int t,
                            double delta0, const BracketOptions& opt) {
  const double m = checked_m(config);
  const auto d = bracket_density(config, green, i, t);
  const double v = regularized_bracket(config, green, i, t, delta0, opt);
  return v - (m - 2.0) * d.quadratic_coefficient * std::pow(delta0, 4.0 - m) / (4.0 - m);
}

double LeadingTermReport::lambda_prediction(double eps) const {
  const int N = static_cast<int>(c.size());
  return convention_factor * D_total * std::pow(eps, m - 2.0) / N;
}

LeadingTermReport d_total(const BlowupConfiguration& config, const GlobalSolutionSummary& summary,
                          const GreenEvaluator& green, std::vector<double> delta0s, int convention_factor,
                          const BracketOptions& opt) {
  config.validate();
  if (convention_factor != 1 && convention_factor != 2) throw InputError("convention factor must be 1 or 2");
  const int n = config.n(), N = config.N();
  if (summary.m.size() != n) throw InputError("summary and configuration sizes differ");
  for (int i = 0; i < n; ++i)
    if (std::abs(summary.m[i] - config.masses[i]) > 1e-6 * std::max(1.0, config.masses[i]))
      throw InputError("configuration masses do not match the global solution");

  LeadingTermReport rep;
  rep.m = checked_m(config);
  rep.convention_factor = convention_factor;
  rep.delta0s = delta0s;
  const auto coeff = coefficient_report(config, green);
  rep.I1 = coeff.I1;
  rep.c = coeff.c;
  rep.cells = voronoi_cells(config.points).description();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int K = static_cast<int>(delta0s.size());
  rep.bracket.assign(K, Matrix::Constant(n, N, nan));
  rep.bracket_extrapolated.assign(K, Matrix::Constant(n, N, nan));
  rep.bracket_limit = Matrix::Constant(n, N, nan);

  const int pairs = static_cast<int>(rep.I1.size()) * N;
  parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t q) {
    const int i = rep.I1[q / N], t = static_cast<int>(q % N);
    rep.bracket_limit(i, t) = bracket_limit(config, green, i, t, opt);
    for (int k = 0; k < K; ++k) {
      rep.bracket[k](i, t) = regularized_bracket(config, green, i, t, delta0s[k], opt);
      rep.bracket_extrapolated[k](i, t) = bracket_extrapolated(config, green, i, t, delta0s[k], opt);
    }
  });

  auto combine = [&](const Matrix& B) {
    double D = 0.0;
    for (int i : rep.I1) {
      const double w = std::exp(summary.D[i] - summary.alpha.alpha[i]);
      for (int t = 0; t < N; ++t) D += w * rep.c[t] * B(i, t);
    }
    return D;
  };
  rep.D_total = combine(rep.bracket_limit);
  for (int k = 0; k < K; ++k) rep.D_finite.push_back(combine(rep.bracket[k]));
  for (int k = 1; k < K; ++k)
    for (int i : rep.I1)
      for (int t = 0; t < N; ++t) {
        const double a = rep.bracket_extrapolated[k - 1](i, t), b = rep.bracket_extrapolated[k](i, t);
        rep.cauchy = std::max(rep.cauchy, std::abs(a - b) / std::max(std::abs(b), 1e-300));
      }
  return rep;
}

double BCoefficientReport::lambda_prediction(double eps) const {
  return -4.0 * b.sum() * eps * eps * std::log(1.0 / eps);
}

BCoefficientReport b_coefficients(const BlowupConfiguration& config, const GlobalSolutionSummary& summary,
                                  const GreenEvaluator& green) {
  config.validate();
  const int n = config.n(), N = config.N();
  for (int i = 0; i < n; ++i)
    if (std::abs(config.masses[i] - 4.0) > 1e-6) throw RegimeError("b coefficients require every m_i = 4");
  if (summary.m.size() != n) throw InputError("summary and configuration sizes differ");
  for (int i = 0; i < n; ++i)
    if (std::abs(summary.m[i] - 4.0) > 1e-6) throw RegimeError("global solution is not in the m_i = 4 regime");

  BCoefficientReport rep;
  rep.b.resize(n, N);
  for (int t = 0; t < N; ++t) {
    const TorusPoint& p = config.points[t];
    const Eigen::Vector2d g = green.gstar_grad(config.points, t);
    for (int i = 0; i < n; ++i) {
      const WeightFunction& h = config.weights[i];
      const double hp = h.value(p);
      const double inner = 0.25 * h.laplacian(p) / hp - config.curvature + 4.0 * kPi * N +
                           4.0 * kPi * (h.gradient(p) / hp).dot(g) + 16.0 * kPi * kPi * g.squaredNorm();
      rep.b(i, t) = std::exp(summary.D[i] - summary.alpha.alpha[i]) * inner;
    }
  }
  return rep;
}

}  // namespace liouville
