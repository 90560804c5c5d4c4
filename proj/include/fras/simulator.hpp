#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fras/controller.hpp"

namespace fras {

struct SimConfig {
  double h = 0.005;
  double horizon = 30.0;
  int record_every = 1;
  bool stop_on_reach = false;

  /* Fixed-grid RK4 with per-cell sub-stepping: a cell is split in half
   * whenever the full-step/two-half-step difference exceeds the tolerance
   * or a stage evaluation is invalid. Smooth cells take the plain full
   * step, so runs without stiff transients reproduce fixed-step RK4
   * exactly. Disable to get the bare fixed-step method. */
  bool stiff_substepping = true;
  int max_substep_depth = 30;
  double substep_rtol = 1e-7;
  double substep_atol = 1e-9;

  void validate() const;
};

/* Columnar record of one closed-loop run. Rows share a uniform spacing of
 * h * record_every. */
struct Trajectory {
  Eigen::VectorXd t;
  SampleMatrix x;         // samples x n
  SampleMatrix u;         // samples x m
  SampleMatrix gamma_lo;  // samples x n
  SampleMatrix gamma_hi;  // samples x n
  SampleMatrix alpha;     // samples x n

  std::string plant_label;
  std::uint64_t seed = 0;
  double step = 0.0;

  Eigen::Index samples() const { return t.size(); }
  int state_dim() const { return static_cast<int>(x.cols()); }
  int input_dim() const { return static_cast<int>(u.cols()); }
};

struct Violation {
  int index;  // dimension or obstacle index
  double time;

  bool operator==(const Violation&) const = default;
};

struct RunReport {
  std::optional<double> reached_target_at;
  std::vector<Violation> obstacle_violations;     // first offending sample per obstacle
  std::vector<Violation> funnel_violations;       // first per dimension
  std::vector<Violation> state_space_violations;  // first per dimension
  double peak_control_norm = 0.0;
  Vec peak_alpha;
  /* min over samples of psi_i + alpha_i, restricted to circumvented
   * dimensions while their trigger is active (psi_i < 0); +inf if the
   * trigger never fires. */
  double min_psi_plus_alpha = std::numeric_limits<double>::infinity();
  std::vector<int> dual_side_dims;

  std::optional<double> aborted_at;
  std::string abort_kind;
  std::string abort_message;

  bool accepted() const {
    return obstacle_violations.empty() && funnel_violations.empty() &&
           state_space_violations.empty() && !aborted_at.has_value();
  }
  bool operator==(const RunReport& o) const;
};

using DerivFn = std::function<Vec(const Vec&, double)>;

/* One classical RK4 step of the augmented state. */
Vec integrate_step(const DerivFn& deriv, const Vec& state, double t, double h);

struct SimOutcome {
  Trajectory trajectory;
  RunReport report;
};

/* Closed-loop integration of [x; alpha] under the RAS law for mf (which is
 * the plain reachability law when mf carries no circumvents). alpha starts
 * at zero. x0 must be strictly inside the funnel at t = 0. A funnel
 * violation or integration failure truncates the run; the trajectory up to
 * the failure and a report flagging the abort are returned. */
SimOutcome simulate(const Plant& plant, const ModifiedFunnel& mf, const ControllerGain& gain,
                    const Environment& env, const Vec& x0, const SimConfig& cfg);

/* Recomputes every per-sample check from the recorded samples, independent
 * of the simulation loop. Matches the report simulate produced. */
RunReport check_invariants(const Trajectory& traj, const Environment& env,
                           const ModifiedFunnel& mf);

/* Same checks against the bounds recorded in the trajectory itself (for
 * externally loaded files, where no funnel object exists). The adaptive gap
 * statistic is not recomputable here and is reported as +inf. */
RunReport check_recorded(const Trajectory& traj, const Environment& env);

}  // namespace fras
