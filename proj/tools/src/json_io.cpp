#include "liouville_tools/json_io.hpp"

#include "liouville/error.hpp"

#include <cmath>

namespace liouville::tools {

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json to_json(const Vector& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(number(v[i]));
  return j;
}

json to_json(const Matrix& m) {
  json j = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(number(m(i, k)));
    j.push_back(row);
  }
  return j;
}

Vector vector_from_json(const json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw InputError("expected an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected an array of numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError("matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw InputError("matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const InteractionMatrix& a) { return {{"n", a.size()}, {"a", to_json(a.a())}}; }

InteractionMatrix interaction_from_json(const json& j) {
  const json& body = j.is_object() ? j.at("a") : j;
  Matrix m = matrix_from_json(body);
  if (j.is_object() && j.contains("n") && j.at("n").get<long>() != m.rows())
    throw InputError("matrix field n does not match the number of rows");
  return InteractionMatrix(std::move(m));
}

json weight_to_json(const WeightFunction& w) {
  json terms = json::array();
  for (const auto& t : w.polynomial().terms)
    terms.push_back({{"k", {t.k1, t.k2}}, {"cos", t.cos_coef}, {"sin", t.sin_coef}});
  return {{"form", w.exponential() ? "exponential" : "polynomial"},
          {"constant", w.polynomial().constant},
          {"terms", terms}};
}

WeightFunction weight_from_json(const json& j) {
  if (j.is_number()) return WeightFunction::constant(j.get<double>());
  if (!j.is_object()) throw InputError("weight must be a number or an object");
  const std::string form = j.value("form", "polynomial");
  if (form != "polynomial" && form != "exponential") throw InputError("weight form must be polynomial or exponential");
  TrigPolynomial p;
  p.constant = j.value("constant", form == "polynomial" ? 1.0 : 0.0);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      const auto& k = t.at("k");
      if (!k.is_array() || k.size() != 2) throw InputError("weight term needs k = [k1, k2]");
      p.terms.push_back({k[0].get<int>(), k[1].get<int>(), t.value("cos", 0.0), t.value("sin", 0.0)});
    }
  }
  return WeightFunction(std::move(p), form == "exponential");
}

json points_to_json(const std::vector<TorusPoint>& points) {
  json j = json::array();
  for (const auto& p : points) j.push_back({p[0], p[1]});
  return j;
}

std::vector<TorusPoint> points_from_json(const json& j) {
  if (!j.is_array()) throw InputError("points must be an array of [x1, x2] pairs");
  std::vector<TorusPoint> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw InputError("points must be an array of [x1, x2] pairs");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

json to_json(const HypothesisReport& r) { return {{"h1", r.h1}, {"h2", r.h2}, {"reasons", r.reasons}}; }

namespace {
json subset_key(const Subset& s) {
  json j = json::array();
  for (int i : s) j.push_back(i + 1);
  return j;
}
}  // namespace

json to_json(const RegionReport& r) {
  json lj = json::array();
  for (const auto& [subset, value] : r.lambda_J) lj.push_back({{"J", subset_key(subset)}, {"lambda", number(value)}});
  json j = {{"lambda_I", number(r.lambda_I)},
            {"lambda_J", lj},
            {"classification", to_string(r.classification)},
            {"normal", to_json(r.normal)},
            {"tol", r.tol}};
  j["degree"] = r.degree ? json(r.degree->str()) : json(nullptr);
  return j;
}

json to_json(const GlobalSolutionSummary& s) {
  return {{"alpha", to_json(s.alpha.alpha)},
          {"sigma", to_json(s.sigma)},
          {"m", to_json(s.m)},
          {"m_min", number(s.m_min)},
          {"D", to_json(s.D)},
          {"m_from_slope", to_json(s.m_from_slope)},
          {"tail_residual", number(s.tail_residual)},
          {"pohozaev_defect", number(s.pohozaev_defect())}};
}

json to_json(const ExpansionReport& r) {
  json comps = json::array();
  for (const auto& c : r.components)
    comps.push_back({{"sup_residual", number(c.sup_residual)},
                     {"decay_exponent", number(c.decay_exponent)},
                     {"kept_exponent", number(c.kept_exponent)},
                     {"fitted_constant", number(c.fitted_constant)},
                     {"expected_constant", number(c.expected_constant)},
                     {"correction_measured", number(c.correction_measured)},
                     {"correction_model", number(c.correction_model)}});
  return {{"r_lo", r.r_lo}, {"r_hi", r.r_hi}, {"components", comps}};
}

json to_json(const MassMapSample& s) {
  return {{"alpha_hat", to_json(s.alpha_hat)},
          {"sigma", to_json(s.sigma)},
          {"jacobian", to_json(s.jacobian)},
          {"det", number(s.det)},
          {"cond", number(s.cond)}};
}

json to_json(const InversionResult& r) {
  return {{"alpha_hat", to_json(r.alpha_hat)},
          {"sigma", to_json(r.sigma)},
          {"iterations", r.iterations},
          {"residual_trace", r.residual_trace}};
}

json to_json(const BlowupConfiguration& c) {
  json w = json::array();
  for (const auto& h : c.weights) w.push_back(weight_to_json(h));
  return {{"points", points_to_json(c.points)}, {"masses", to_json(c.masses)}, {"weights", w}};
}

json to_json(const CoefficientReport& r) {
  json res = json::array();
  for (const auto& v : r.residuals) res.push_back({v[0], v[1]});
  json I1 = json::array();
  for (int i : r.I1) I1.push_back(i + 1);
  return {{"H", to_json(r.H)},
          {"c", to_json(r.c)},
          {"c_by_component", to_json(r.c_by_component)},
          {"I1", I1},
          {"c_spread", number(r.c_spread)},
          {"c_consistent", r.c_consistent},
          {"compatibility_defect", number(r.compatibility_defect)},
          {"residuals", res}};
}

json to_json(const LeadingTermReport& r) {
  json I1 = json::array();
  for (int i : r.I1) I1.push_back(i + 1);
  json rows = json::array();
  for (std::size_t k = 0; k < r.delta0s.size(); ++k)
    rows.push_back({{"delta0", r.delta0s[k]},
                    {"bracket", to_json(r.bracket[k])},
                    {"bracket_extrapolated", to_json(r.bracket_extrapolated[k])},
                    {"D", number(r.D_finite[k])}});
  return {{"I1", I1},
          {"m", r.m},
          {"c", to_json(r.c)},
          {"by_delta0", rows},
          {"bracket_limit", to_json(r.bracket_limit)},
          {"D_total", number(r.D_total)},
          {"cauchy", number(r.cauchy)},
          {"convention_factor", r.convention_factor},
          {"cells", r.cells}};
}

json to_json(const BCoefficientReport& r) { return {{"b", to_json(r.b)}}; }

json to_json(const ContinuationRecord& r) {
  return {{"step", r.step},
          {"resolution", r.resolution},
          {"rho", to_json(r.rho)},
          {"lambda_I", number(r.lambda_measured)},
          {"bubble_points", points_to_json(r.bubble_points)},
          {"M_kt", r.M_kt},
          {"eps_kt", r.eps_kt},
          {"rho_it", to_json(r.rho_it)},
          {"rho_ib", to_json(r.rho_ib)},
          {"sigma_unweighted", to_json(r.sigma_unweighted)},
          {"height_spread", r.height_spread},
          {"mass_spread", r.mass_spread},
          {"max_theta", r.max_theta},
          {"residual", r.residual_norm},
          {"arclength", r.arclength}};
}

}  // namespace liouville::tools
