#pragma once

#include "fras/simulator.hpp"

namespace fras {

struct SynthesisParams {
  /* Circumvent construction. */
  double delta_t = 0.1;
  double delta_B = 0.0;
  double k_bump = 0.001;

  AdaptiveParams adaptive;
  ControllerGain gain;
  SimConfig sim;

  /* Reach funnel shape; eta empty selects the target midpoint. */
  Vec decay;
  Vec rho_inf;
  Vec eta;

  int max_iterations = 25;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ChoiceLogEntry {
  int obstacle = -1;
  int dim = -1;
  Side side = Side::Lower;
  /* True when an existing bump for this obstacle was widened (window
   * union) instead of inserting a new one. */
  bool widened = false;
  double window_lo = 0.0;
  double window_hi = 0.0;

  bool operator==(const ChoiceLogEntry&) const = default;
};

struct SynthesisResult {
  ModifiedFunnel funnel;
  Trajectory trajectory;
  RunReport report;
  int iterations_used = 0;
  std::vector<ChoiceLogEntry> choice_log;
};

/* Non-termination and aborted runs are real outcomes; they surface with
 * the choices made so far and the last trajectory attached. */
class SynthesisError : public Error {
public:
  SynthesisError(const std::string& msg, std::vector<ChoiceLogEntry> log, Trajectory last)
      : Error(msg), choice_log(std::move(log)), last_trajectory(std::move(last)) {}
  const char* kind() const override { return "synthesis_failure"; }

  std::vector<ChoiceLogEntry> choice_log;
  Trajectory last_trajectory;
};

/* The outer loop: simulate, find the first violated obstacle, insert (or
 * widen) a circumvent function, repeat until the trajectory clears the
 * whole unsafe region or max_iterations is exhausted. iterations_used
 * counts inserted/widened circumvents; 0 means the plain reach controller
 * already satisfied the specification. */
SynthesisResult synthesize(const Environment& env, const Plant& plant, const Vec& x0,
                           const SynthesisParams& params);

/* Re-runs the loop with the recorded choices instead of the RNG, verifying
 * every logged event against what the deterministic parts recompute.
 * The result matches the original run exactly. */
SynthesisResult replay(const Environment& env, const Plant& plant, const Vec& x0,
                       const std::vector<ChoiceLogEntry>& choice_log,
                       const SynthesisParams& params);

}  // namespace fras
