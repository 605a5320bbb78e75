#include "liouville_tools/cli.hpp"

#include "liouville/error.hpp"
#include "liouville_tools/config.hpp"
#include "liouville_tools/manifest.hpp"
#include "liouville_tools/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <numbers>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#ifndef LIOUVILLE_VERSION
#define LIOUVILLE_VERSION "0.0.0"
#endif

namespace liouville::tools {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string matrix, config, out;
  double tol = 0.0;
  int resolution = 0;
  double delta0 = 0.0;
  int convention_factor = 2;
  CLI::Option *tol_opt = nullptr, *res_opt = nullptr, *delta0_opt = nullptr, *cf_opt = nullptr;
};

// Everything a command needs after parsing: merged configuration and output sink.
class Context {
 public:
  Context(const Globals& g, std::ostream& out) : g_(g), out_(out) {
    if (!g.config.empty()) config_ = ExperimentConfig::load(g.config);
    if (!g.matrix.empty()) config_.matrix = interaction_from_json(read_json_argument(g.matrix));
    out_dir_ = g.out.empty() ? config_.output_dir : g.out;
  }

  const ExperimentConfig& config() const { return config_; }

  const InteractionMatrix& matrix() const {
    if (!config_.matrix) throw InputError("this command needs a coupling matrix (--matrix or config \"matrix\")");
    return *config_.matrix;
  }

  std::vector<WeightFunction> weights(int n) const {
    if (config_.weights.empty()) return std::vector<WeightFunction>(n, WeightFunction::constant(1.0));
    if (static_cast<int>(config_.weights.size()) != n)
      throw InputError("expected " + std::to_string(n) + " weights, got " + std::to_string(config_.weights.size()));
    return config_.weights;
  }

  /// Command-line value if the option was given, else params[key] from the config, else `value` unchanged.
  template <class T>
  void merge(const CLI::Option* opt, const std::string& key, T& value) const {
    if (opt && opt->count() > 0) return;
    if (config_.params.contains(key)) value = config_.params.at(key).get<T>();
  }

  std::optional<double> tol() const { return given(g_.tol_opt, "tol", g_.tol); }
  std::optional<int> resolution() const { return given(g_.res_opt, "resolution", g_.resolution); }
  std::optional<double> delta0() const { return given(g_.delta0_opt, "delta0", g_.delta0); }
  int convention_factor() const { return given(g_.cf_opt, "convention_factor", g_.convention_factor).value_or(2); }

  bool writes_files() const { return !out_dir_.empty(); }

  /// Prints to stdout without --out; otherwise writes a manifest-tracked file.
  void emit_json(const std::string& name, const json& doc) {
    if (writes_files())
      write_artifact(manifest_, out_dir_, name, doc.dump(2) + "\n");
    else
      out_ << doc.dump(2) << "\n";
  }

  /// Tabular series are only written as files.
  void emit_csv(const std::string& name, const std::string& csv) {
    if (writes_files()) write_artifact(manifest_, out_dir_, name, csv);
  }

  std::ostream& out() { return out_; }

  void finish(const std::string& command, const std::string& argv_line, const std::string& started,
              const std::string& status, int code) {
    if (!writes_files()) return;
    manifest_.toolkit_version = LIOUVILLE_VERSION;
    manifest_.command = command;
    manifest_.config_hash = sha256_hex(config_.canonical() + "\n" + argv_line);
    manifest_.started = started;
    manifest_.finished = utc_timestamp();
    manifest_.status = status;
    manifest_.exit_code = code;
    fs::create_directories(out_dir_);
    std::ofstream(fs::path(out_dir_) / "manifest.json") << manifest_.to_json().dump(2) << "\n";
  }

 private:
  template <class T>
  std::optional<T> given(const CLI::Option* opt, const std::string& key, T v) const {
    if (opt && opt->count() > 0) return v;
    if (config_.params.contains(key)) return config_.params.at(key).get<T>();
    return std::nullopt;
  }

  const Globals& g_;
  std::ostream& out_;
  ExperimentConfig config_;
  std::string out_dir_;
  RunManifest manifest_;
};

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), v.size()); }

std::vector<TorusPoint> read_points(const Context& ctx, const CLI::Option* opt, const std::string& arg) {
  if (opt->count() > 0) return points_from_json(read_json_argument(arg));
  if (ctx.config().params.contains("points")) return points_from_json(ctx.config().params.at("points"));
  throw InputError("this command needs --points (or params.points in the config)");
}

RadialOptions radial_options(const Context& ctx) {
  RadialOptions opt;
  if (auto t = ctx.tol()) opt.tol = *t;
  return opt;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

using Action = std::function<int(Context&)>;

struct Registry {
  CLI::App& app;
  std::vector<std::pair<CLI::App*, Action>> commands;

  std::vector<std::shared_ptr<void>> storage;  // option targets live as long as one run_cli call

  CLI::App* add(const std::string& name, const std::string& help) { return app.add_subcommand(name, help); }
  template <class T>
  T& hold(T init = T{}) {
    auto p = std::make_shared<T>(std::move(init));
    storage.push_back(p);
    return *p;
  }
  void bind(CLI::App* sub, Action act) { commands.emplace_back(sub, std::move(act)); }
};

void register_algebra(Registry& reg) {
  auto* check = reg.add("check-matrix", "Check the structural hypotheses on the coupling matrix");
  reg.bind(check, [](Context& ctx) {
    const auto& a = ctx.matrix();
    json doc = to_json(check_hypotheses(a));
    doc["matrix"] = matrix_to_json(a);
    doc["invertible"] = a.invertible();
    if (a.invertible()) doc["inverse"] = to_json(a.inverse());
    ctx.emit_json("check-matrix.json", doc);
    return 0;
  });

  auto* gamma = reg.add("gamma", "Lambda values and the position of rho relative to Gamma_N");
  auto& rho = reg.hold<std::vector<double>>();
  auto& level = reg.hold<int>(1);
  auto& chi = reg.hold<int>(0);
  auto* rho_opt = gamma->add_option("--rho", rho, "rho_1 ... rho_n");
  auto* level_opt = gamma->add_option("--N,--level", level, "concentration level")->check(CLI::PositiveNumber);
  auto* chi_opt = gamma->add_option("--chi", chi, "Euler characteristic")->capture_default_str();
  reg.bind(gamma, [=, &rho, &level, &chi](Context& ctx) {
    ctx.merge(rho_opt, "rho", rho);
    ctx.merge(level_opt, "level", level);
    ctx.merge(chi_opt, "chi", chi);
    ParameterPoint p{to_vector(rho), level};
    p.validate();
    const double tol = ctx.tol().value_or(default_gamma_tol(p));
    json doc = to_json(classify(ctx.matrix(), p, tol, chi));
    doc["rho"] = to_json(p.rho);
    doc["level"] = level;
    ctx.emit_json("gamma.json", doc);
    return 0;
  });

  auto* q = reg.add("qpoint", "The point Q_N where every m_i = 4");
  auto& q_level = reg.hold<int>(1);
  auto* q_level_opt = q->add_option("--N,--level", q_level, "concentration level")->check(CLI::PositiveNumber);
  reg.bind(q, [=, &rho, &level, &chi, &q_level](Context& ctx) {
    ctx.merge(q_level_opt, "level", q_level);
    const auto p = q_point(ctx.matrix(), q_level);
    ctx.emit_json("qpoint.json", {{"level", q_level}, {"q", to_json(p.rho)}});
    return 0;
  });

  auto* deg = reg.add("degree", "Leray-Schauder degree in the region O_N");
  auto& d_level = reg.hold<int>(0);
  auto& d_chi = reg.hold<int>(0);
  deg->add_option("--N,--level", d_level, "number of crossings")->required();
  deg->add_option("--chi", d_chi, "Euler characteristic")->required();
  reg.bind(deg, [=, &rho, &level, &chi, &q_level, &d_level, &d_chi](Context& ctx) {
    const Rational r = degree(d_level, d_chi);
    if (ctx.writes_files())
      ctx.emit_json("degree.json", {{"N", d_level}, {"chi", d_chi}, {"degree", r.str()}, {"value", r.value()}});
    else
      ctx.out() << r.str() << "\n";
    return 0;
  });
}

void register_radial(Registry& reg) {
  auto* gs = reg.add("global-solve", "Radial global solution for given heights alpha");
  auto& alpha = reg.hold<std::vector<double>>();
  auto& r_max = reg.hold<double>(1e5);
  auto& window = reg.hold<std::vector<double>>();
  auto* alpha_opt = gs->add_option("--alpha", alpha, "height deficits alpha_1 ... alpha_n (a single 0 means all zero)");
  auto* rmax_opt = gs->add_option("--r-max", r_max, "outer radius")->capture_default_str();
  auto* window_opt = gs->add_option("--window", window, "r_lo r_hi for the expansion report")->expected(2);
  reg.bind(gs, [=, &alpha, &r_max, &window](Context& ctx) {
    ctx.merge(alpha_opt, "alpha", alpha);
    ctx.merge(rmax_opt, "r_max", r_max);
    ctx.merge(window_opt, "window", window);
    const auto& a = ctx.matrix();
    Vector al = Vector::Zero(a.size());
    if (alpha.size() == static_cast<std::size_t>(a.size()))
      al = to_vector(alpha);
    else if (!(alpha.size() == 1 && alpha[0] == 0.0) && !alpha.empty())
      throw InputError("--alpha needs " + std::to_string(a.size()) + " values");
    RadialOptions opt = radial_options(ctx);
    opt.r_max = r_max;
    const auto profile = integrate(a, HeightVector{al}, opt);
    const auto s = summarize(a, profile);
    json doc = to_json(s);
    if (window.size() == 2) doc["expansion"] = to_json(expansion_residual(a, s, profile, window[0], window[1]));
    ctx.emit_json("global-solve.json", doc);

    std::ostringstream csv;
    csv << "r";
    for (int i = 0; i < a.size(); ++i) csv << ",U" << i + 1 << ",rdU" << i + 1 << ",mass" << i + 1;
    csv << "\n";
    for (std::size_t k = 0; k < profile.r.size(); ++k) {
      csv << fmt(profile.r[k]);
      for (int i = 0; i < a.size(); ++i)
        csv << "," << fmt(profile.U(i, k)) << "," << fmt(profile.r[k] * profile.dU(i, k)) << "," << fmt(profile.mass(i, k));
      csv << "\n";
    }
    ctx.emit_csv("profile.csv", csv.str());
    return 0;
  });

  auto* mm = reg.add("mass-map", "Mass map sigma(alpha_hat): Jacobian, inversion or random sampling");
  auto& alpha_hat = reg.hold<std::vector<double>>();
  auto& target = reg.hold<std::vector<double>>();
  auto& start = reg.hold<std::vector<double>>();
  auto& samples = reg.hold<int>(0);
  auto* ah_opt = mm->add_option("--alpha-hat", alpha_hat, "free heights alpha_2 ... alpha_n");
  auto* tgt_opt = mm->add_option("--sigma", target, "invert: target sigma_2 ... sigma_n");
  auto* start_opt = mm->add_option("--start", start, "invert: starting alpha_hat");
  auto* samples_opt = mm->add_option("--samples", samples, "random alpha_hat samples in [0,2]^(n-1)");
  reg.bind(mm, [=, &alpha, &r_max, &window, &alpha_hat, &target, &start, &samples](Context& ctx) {
    ctx.merge(ah_opt, "alpha_hat", alpha_hat);
    ctx.merge(tgt_opt, "sigma", target);
    ctx.merge(start_opt, "start", start);
    ctx.merge(samples_opt, "samples", samples);
    const auto& a = ctx.matrix();
    const int free = a.size() - 1;
    if (free < 1) throw InputError("mass-map needs n >= 2");
    const RadialOptions ropt = radial_options(ctx);
    json doc = json::object();
    if (!target.empty()) {
      if (static_cast<int>(target.size()) != free) throw InputError("--sigma needs n-1 values");
      const Vector s0 = start.empty() ? Vector::Zero(free) : to_vector(start);
      if (s0.size() != free) throw InputError("--start needs n-1 values");
      InversionOptions inv;
      if (auto t = ctx.tol()) inv.rel_tol = *t;
      doc["inversion"] = to_json(invert(a, to_vector(target), s0, inv, ropt));
    }
    if (!alpha_hat.empty()) {
      if (static_cast<int>(alpha_hat.size()) != free) throw InputError("--alpha-hat needs n-1 values");
      doc["sample"] = to_json(jacobian(a, to_vector(alpha_hat), 1e-3, ropt));
    }
    if (samples > 0) {
      std::mt19937_64 rng(ctx.config().seed);
      std::uniform_real_distribution<double> u(0.0, 2.0);
      std::ostringstream csv;
      for (int i = 0; i < free; ++i) csv << "alpha" << i + 2 << ",";
      for (int i = 0; i < free; ++i) csv << "sigma" << i + 2 << ",";
      csv << "det,cond\n";
      double min_det = std::numeric_limits<double>::infinity();
      for (int k = 0; k < samples; ++k) {
        Vector ah(free);
        for (int i = 0; i < free; ++i) ah[i] = u(rng);
        const auto s = jacobian(a, ah, 1e-3, ropt);
        min_det = std::min(min_det, std::abs(s.det));
        for (int i = 0; i < free; ++i) csv << fmt(ah[i]) << ",";
        for (int i = 0; i < free; ++i) csv << fmt(s.sigma[i + 1]) << ",";
        csv << fmt(s.det) << "," << fmt(s.cond) << "\n";
      }
      doc["samples"] = samples;
      doc["min_abs_det"] = number(min_det);
      ctx.emit_csv("mass-map-samples.csv", csv.str());
    }
    if (doc.empty()) throw InputError("mass-map needs --alpha-hat, --sigma or --samples");
    ctx.emit_json("mass-map.json", doc);
    return 0;
  });
}

void register_geometry(Registry& reg) {
  auto* gp = reg.add("green-probe", "Green's function of the unit torus at a pair of points");
  auto& x = reg.hold<std::vector<double>>(std::vector<double>{0.25, 0.25});
  auto& y = reg.hold<std::vector<double>>(std::vector<double>{0.0, 0.0});
  auto& mode = reg.hold<std::string>("fourier");
  auto& param = reg.hold<double>(0.0);
  gp->add_option("--x", x, "first point")->expected(2);
  gp->add_option("--y", y, "second point")->expected(2);
  gp->add_option("--mode", mode, "fourier or ewald")->check(CLI::IsMember({"fourier", "ewald"}))->capture_default_str();
  gp->add_option("--parameter", param, "terms (fourier) or splitting width (ewald); 0 for the default");
  reg.bind(gp, [=, &x, &y, &mode, &param](Context& ctx) {
    const GreenEvaluator g(mode == "ewald" ? GreenMode::ewald : GreenMode::fourier, param);
    const TorusPoint px(x[0], x[1]), py(y[0], y[1]);
    json doc{{"mode", mode}, {"parameter", g.parameter()}, {"x", to_json(Vector(px))}, {"y", to_json(Vector(py))},
             {"robin", g.robin()}};
    if (torus_distance(px, py) > 1e-12) {
      doc["green"] = g.green(px, py);
      doc["grad1_green"] = to_json(Vector(g.grad1_green(px, py)));
    }
    doc["regular_part"] = g.regular_part(px, py);
    ctx.emit_json("green-probe.json", doc);
    if (auto M = ctx.resolution(); M && ctx.writes_files()) {
      TorusGrid grid(*M);
      std::ostringstream csv;
      csv << "x1,x2,G\n";
      for (int idx = 0; idx < grid.size(); ++idx) {
        const TorusPoint p = grid.point(idx);
        csv << fmt(p[0]) << "," << fmt(p[1]) << ",";
        csv << (torus_distance(p, py) > 1e-12 ? fmt(g.green(p, py)) : std::string("")) << "\n";
      }
      ctx.emit_csv("green-grid.csv", csv.str());
    }
    return 0;
  });

  auto* loc = reg.add("locations", "Solve for blowup locations and report H_{i,t} and c_t");
  auto& points = reg.hold<std::string>();
  auto& masses = reg.hold<std::vector<double>>();
  auto& gauge = reg.hold<std::string>("automatic");
  auto* pts_opt = loc->add_option("--points", points, "initial points, JSON [[x1,x2],...] or a file");
  auto* m_opt = loc->add_option("--masses", masses, "m_1 ... m_n (default 4)");
  loc->add_option("--gauge", gauge)->check(CLI::IsMember({"automatic", "fix_first", "free"}))->capture_default_str();
  reg.bind(loc, [=, &x, &y, &mode, &param, &points, &masses, &gauge](Context& ctx) {
    ctx.merge(m_opt, "masses", masses);
    const int n = ctx.config().matrix ? ctx.matrix().size() : std::max<int>(1, masses.size());
    const Vector m = masses.empty() ? Vector::Constant(n, 4.0) : to_vector(masses);
    LocationOptions opt;
    if (auto t = ctx.tol()) opt.tol = *t;
    opt.gauge = gauge == "fix_first" ? Gauge::fix_first : gauge == "free" ? Gauge::free : Gauge::automatic;
    const GreenEvaluator green;
    const auto sol = solve_locations(ctx.weights(m.size()), m, read_points(ctx, pts_opt, points), green, opt);
    json doc{{"configuration", to_json(sol.config)},
             {"iterations", sol.iterations},
             {"gauge_fixed", sol.gauge_fixed},
             {"residual_trace", sol.residual_trace},
             {"coefficients", to_json(coefficient_report(sol.config, green))}};
    ctx.emit_json("locations.json", doc);
    return 0;
  });
}

BlowupConfiguration blowup_from(const Context& ctx, const GlobalSolutionSummary& s, std::vector<TorusPoint> pts) {
  BlowupConfiguration cfg;
  cfg.points = std::move(pts);
  cfg.masses = s.m;
  cfg.weights = ctx.weights(s.m.size());
  cfg.validate();
  return cfg;
}

void register_leading(Registry& reg) {
  auto* lt = reg.add("leading-term", "Regularized brackets and the leading coefficient D (regime m < 4)");
  auto& points = reg.hold<std::string>();
  auto& alpha = reg.hold<std::vector<double>>();
  auto& delta0s = reg.hold<std::vector<double>>();
  auto& eps = reg.hold<std::vector<double>>();
  auto* pts_opt = lt->add_option("--points", points, "blowup points, JSON [[x1,x2],...] or a file");
  auto* alpha_opt = lt->add_option("--alpha", alpha, "heights of the global solution");
  auto* d_opt = lt->add_option("--delta0s", delta0s, "delta0 ladder (default 0.08 0.04 0.02)");
  auto* eps_opt = lt->add_option("--eps", eps, "evaluate the predicted Lambda_I at these eps");
  reg.bind(lt, [=, &points, &alpha, &delta0s, &eps](Context& ctx) {
    ctx.merge(alpha_opt, "alpha", alpha);
    ctx.merge(d_opt, "delta0s", delta0s);
    ctx.merge(eps_opt, "eps", eps);
    const auto& a = ctx.matrix();
    const Vector al = alpha.empty() ? Vector::Zero(a.size()) : to_vector(alpha);
    const auto s = solve_global(a, HeightVector{al}, radial_options(ctx));
    const auto cfg = blowup_from(ctx, s, read_points(ctx, pts_opt, points));
    std::vector<double> ladder = delta0s;
    if (ladder.empty()) {
      const double d0 = ctx.delta0().value_or(0.08);
      ladder = {d0, d0 / 2, d0 / 4};
    }
    const auto rep = d_total(cfg, s, GreenEvaluator{}, ladder, ctx.convention_factor());
    json doc = to_json(rep);
    doc["global_solution"] = to_json(s);
    json pred = json::array();
    for (double e : eps) pred.push_back({{"eps", e}, {"lambda_I", number(rep.lambda_prediction(e))}});
    if (!eps.empty()) doc["prediction"] = pred;
    ctx.emit_json("leading-term.json", doc);
    return 0;
  });

  auto* bc = reg.add("b-coeff", "Coefficients b_it for the regime m_i = 4");
  auto& b_points = reg.hold<std::string>();
  auto& b_alpha = reg.hold<std::vector<double>>();
  auto& b_eps = reg.hold<std::vector<double>>();
  auto* bpts_opt = bc->add_option("--points", b_points, "blowup points, JSON [[x1,x2],...] or a file");
  auto* balpha_opt = bc->add_option("--alpha", b_alpha, "heights of the global solution (all m_i must be 4)");
  auto* beps_opt = bc->add_option("--eps", b_eps, "evaluate the predicted Lambda_I at these eps");
  reg.bind(bc, [=, &points, &alpha, &delta0s, &eps, &b_points, &b_alpha, &b_eps](Context& ctx) {
    ctx.merge(balpha_opt, "alpha", b_alpha);
    ctx.merge(beps_opt, "eps", b_eps);
    const auto& a = ctx.matrix();
    const Vector al = b_alpha.empty() ? Vector::Zero(a.size()) : to_vector(b_alpha);
    const auto s = solve_global(a, HeightVector{al}, radial_options(ctx));
    const auto cfg = blowup_from(ctx, s, read_points(ctx, bpts_opt, b_points));
    const auto rep = b_coefficients(cfg, s, GreenEvaluator{});
    json doc = to_json(rep);
    doc["sum_b"] = rep.b.sum();
    json pred = json::array();
    for (double e : b_eps) pred.push_back({{"eps", e}, {"lambda_I", number(rep.lambda_prediction(e))}});
    if (!b_eps.empty()) doc["prediction"] = pred;
    ctx.emit_json("b-coeff.json", doc);
    return 0;
  });
}

void register_pde(Registry& reg) {
  auto* pc = reg.add("pde-continue", "Continue a mean-field solution branch along a ray in rho");
  auto& rho_start = reg.hold<std::vector<double>>();
  auto& direction = reg.hold<std::vector<double>>();
  auto& c = reg.hold<ContinuationControls>();
  auto* rs_opt = pc->add_option("--rho-start", rho_start, "starting rho (default 4 pi per component)");
  auto* dir_opt = pc->add_option("--direction", direction, "ray direction (default all ones)");
  auto* lvl_opt = pc->add_option("--N,--level", c.level, "concentration level")->capture_default_str();
  auto* ms_opt = pc->add_option("--max-steps", c.max_steps)->capture_default_str();
  auto* m0_opt = pc->add_option("--resolution-start", c.resolution_start)->capture_default_str();
  auto* st_opt = pc->add_option("--step-init", c.step_init)->capture_default_str();
  auto* sh_opt = pc->add_option("--stop-height", c.stop_height, "stop once the peak height exceeds this");
  auto* surf_opt = pc->add_flag("--stop-at-surface", c.stop_at_surface, "stop when Lambda_I changes sign");
  reg.bind(pc, [=, &rho_start, &direction, &c](Context& ctx) {
    ctx.merge(rs_opt, "rho_start", rho_start);
    ctx.merge(dir_opt, "direction", direction);
    ctx.merge(lvl_opt, "level", c.level);
    ctx.merge(ms_opt, "max_steps", c.max_steps);
    ctx.merge(m0_opt, "resolution_start", c.resolution_start);
    ctx.merge(st_opt, "step_init", c.step_init);
    ctx.merge(sh_opt, "stop_height", c.stop_height);
    ctx.merge(surf_opt, "stop_at_surface", c.stop_at_surface);
    ContinuationControls controls = c;
    if (auto t = ctx.tol()) controls.tol = *t;
    if (auto m = ctx.resolution()) controls.resolution_max = *m;
    if (auto d = ctx.delta0()) controls.delta0 = *d;
    const auto& a = ctx.matrix();
    const Vector r0 = rho_start.empty() ? Vector::Constant(a.size(), 4.0 * std::numbers::pi) : to_vector(rho_start);
    const Vector dir = direction.empty() ? Vector::Ones(a.size()) : to_vector(direction);
    const auto res = continue_ray(a, ctx.weights(a.size()), r0, dir, controls);
    json recs = json::array();
    for (const auto& r : res.records) recs.push_back(to_json(r));
    json doc{{"stop_reason", to_string(res.reason)},
             {"message", res.message},
             {"fold_steps", res.fold_steps},
             {"exit_code", res.exit_code()},
             {"records", recs}};
    ctx.emit_json("continuation.json", doc);
    std::ostringstream csv;
    write_continuation_csv(csv, res.records);
    ctx.emit_csv("continuation.csv", csv.str());
    return res.exit_code();
  });
}

void register_verify(Registry& reg) {
  auto* v = reg.add("verify-all", "Run the acceptance property suite");
  auto& only = reg.hold<std::vector<int>>();
  v->add_option("--only", only, "criterion ids to run (default all)");
  reg.bind(v, [=, &only](Context& ctx) {
    const auto results = run_acceptance(only, ctx.out());
    bool ok = !results.empty();
    json arr = json::array();
    for (const auto& r : results) {
      ok = ok && r.passed;
      arr.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    if (ctx.writes_files()) ctx.emit_json("verify.json", {{"passed", ok}, {"criteria", arr}});
    return ok ? 0 : static_cast<int>(kAborted);
  });
}

json error_json(const std::string& command, const std::string& kind, const std::string& message) {
  return {{"error", {{"command", command}, {"kind", kind}, {"message", message}}}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical toolkit for Liouville systems on the flat torus", "liouville"};
  app.set_version_flag("--version", LIOUVILLE_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--matrix", g.matrix, "coupling matrix: JSON file or inline JSON");
  app.add_option("--config", g.config, "experiment config file");
  app.add_option("--out", g.out, "output directory for artifacts and manifest.json");
  g.tol_opt = app.add_option("--tol", g.tol, "solver tolerance");
  g.res_opt = app.add_option("--resolution", g.resolution, "grid resolution M")->check(CLI::PositiveNumber);
  g.delta0_opt = app.add_option("--delta0", g.delta0, "bubble disk / subtraction radius");
  g.cf_opt = app.add_option("--convention-factor", g.convention_factor, "factor in the leading-term prediction")
                 ->check(CLI::IsMember({1, 2}));

  Registry reg{app, {}, {}};
  register_algebra(reg);
  register_radial(reg);
  register_geometry(reg);
  register_leading(reg);
  register_pde(reg);
  register_verify(reg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : static_cast<int>(kUsage);
  }

  std::string argv_line;
  for (int i = 1; i < argc; ++i) argv_line += std::string(i > 1 ? " " : "") + argv[i];

  for (auto& [sub, action] : reg.commands) {
    if (!sub->parsed()) continue;
    const std::string name = sub->get_name();
    const std::string started = utc_timestamp();
    std::optional<Context> ctx;
    try {
      ctx.emplace(g, out);
      const int code = action(*ctx);
      ctx->finish(name, argv_line, started, code == 0 ? "ok" : "aborted", code);
      return code;
    } catch (const Error& e) {
      err << error_json(name, e.kind(), e.what()).dump() << "\n";
      if (ctx) ctx->finish(name, argv_line, started, e.kind(), kModuleError);
      return kModuleError;
    } catch (const json::exception& e) {
      err << error_json(name, "input", e.what()).dump() << "\n";
      if (ctx) ctx->finish(name, argv_line, started, "input", kModuleError);
      return kModuleError;
    }
  }
  return kUsage;
}

}  // namespace liouville::tools
