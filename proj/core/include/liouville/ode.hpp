#pragma once

#include <Eigen/Dense>

#include <functional>

namespace liouville::ode {

using State = Eigen::VectorXd;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;
/// Called after every accepted step with the new time, state and derivative.
/// Returning false stops the integration early.
using Observer = std::function<bool(double t, const State& y, const State& dydt)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_max = 1.0;
  long max_steps = 5'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  double t_end = 0.0;
  bool stopped_by_observer = false;
};

/// Adaptive Dormand-Prince 5(4) with local extrapolation, FSAL and a PI-free
/// elementary controller. Throws StiffnessError when the step size underflows.
Stats integrate(const Rhs& rhs, double t0, double t1, State& y, const Options& opt,
                const Observer& observer = {});

/// Cubic Hermite interpolation between (t0, y0, f0) and (t1, y1, f1).
double hermite(double t0, double y0, double f0, double t1, double y1, double f1, double t);

}  // namespace liouville::ode
