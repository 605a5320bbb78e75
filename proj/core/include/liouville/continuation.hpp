#pragma once

#include "liouville/meanfield_pde.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace liouville {

struct ContinuationControls {
  int level = 1;                // N in Lambda_I and in the surface test
  int resolution_start = 128;
  int resolution_max = 512;
  double step_init = 0.5;       // initial step in the ray parameter
  double step_min = 1e-4;
  double step_max = 2.0;
  double tol = 1e-10;           // Newton residual tolerance
  int max_steps = 400;
  double delta0 = 0.15;
  double cells_per_core = 8.0;  // refine (or stop) once eps < cells_per_core / M
  bool stop_at_surface = false; // stop when Lambda_I changes sign
  int max_retries = 8;
  double max_height_step = 0.75;  // cap on the change of max u per accepted step
  /// Stop once max_i max_x Theta_i reaches this value (off by default).
  double stop_height = std::numeric_limits<double>::infinity();
};

enum class StopReason { resolution, surface, height, max_steps, solver_failure };
std::string to_string(StopReason r);

/// Two consecutive branch points, t being the ray parameter.
struct BranchSeed {
  FieldState previous, current;
  double t_previous = 0.0, t_current = 0.0;
};

struct ContinuationResult {
  std::vector<ContinuationRecord> records;
  StopReason reason = StopReason::max_steps;
  std::string message;
  FieldState final_state;
  std::vector<int> fold_steps;  // steps at which the ray parameter reversed direction
  std::optional<BranchSeed> tail;  // last two accepted points, when there are two

  /// 0 for a resolution, surface or height stop, 2 otherwise.
  int exit_code() const;
};

using RecordCallback = std::function<void(const ContinuationRecord&)>;

/// Follows the solution branch starting from the solution at rho_start (Newton
/// from u = 0) along rho = rho_start + t * direction. Natural-parameter steps
/// in t switch to pseudo-arclength once a step fails repeatedly (fold signal).
/// The grid is doubled when the bubble width drops below cells_per_core
/// spacings and the run stops when that happens at resolution_max.
///
/// With a seed (for instance the tail of a run with other weights) both seed
/// states are corrected for the given weights and the run starts in
/// pseudo-arclength mode along the seed's secant.
ContinuationResult continue_ray(const InteractionMatrix& a, const std::vector<WeightFunction>& weights,
                                const Vector& rho_start, const Vector& direction,
                                const ContinuationControls& controls = {}, const RecordCallback& on_record = {},
                                const std::optional<BranchSeed>& seed = std::nullopt);

/// Columns: step, rho_1..rho_n, lambda_I, N_detected, M_k1..M_kN, eps_k1..eps_kN,
/// rho_it (row-major, i outer), residual. The header uses the largest N seen;
/// rows with fewer bubbles leave the missing cells empty.
void write_continuation_csv(std::ostream& os, const std::vector<ContinuationRecord>& records);

}  // namespace liouville
