#include "fras/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace fras {

void SynthesisParams::validate() const {
  if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
  if (!(delta_t > 0.0)) throw ParameterError("delta_t must be positive");
  if (!(k_bump > 0.0)) throw ParameterError("k_bump must be positive");
  if (!(delta_B >= 0.0)) throw ParameterError("delta_B must be non-negative");
  adaptive.validate();
  sim.validate();
  /* Windows come off the sampled grid; delta_t must absorb one step. */
  if (sim.h * sim.record_every > delta_t) {
    throw ParameterError("delta_t must be at least the trajectory sample spacing");
  }
}

namespace {

struct ChoiceHooks {
  /* Pick (dim, side) for a fresh circumvent on the given obstacle. */
  std::function<std::pair<int, Side>(const Trajectory&, int, const ObstacleShape&)> pick;
  /* Called for every log event (fresh or widened) as it is committed. */
  std::function<void(const ChoiceLogEntry&)> observe;
  /* Called once after the loop finishes successfully. */
  std::function<void()> finish;
};

SynthesisResult run_loop(const Environment& env, const Plant& plant, const Vec& x0,
                         const SynthesisParams& params, ChoiceHooks& hooks) {
  params.validate();
  const int n = env.dim();
  if (plant.n != n) throw DimensionError("plant/environment dimension mismatch");
  if (x0.size() != n) throw DimensionError("initial state dimension mismatch");
  if (!env.state_space.contains(x0)) throw ParameterError("x0 outside the state space");
  if (env.in_unsafe(x0)) throw ParameterError("x0 lies inside an obstacle");

  const Vec eta = params.eta.size() ? params.eta : default_eta(env);
  ModifiedFunnel mf;
  mf.reach = make_reach_funnel(env, eta, params.decay, params.rho_inf);
  mf.params = params.adaptive;

  std::vector<ChoiceLogEntry> log;
  Trajectory last_traj;

  for (int iter = 0; iter <= params.max_iterations; ++iter) {
    SimOutcome outcome = simulate(plant, mf, params.gain, env, x0, params.sim);
    last_traj = outcome.trajectory;
    if (outcome.report.aborted_at) {
      std::ostringstream os;
      os << "simulation aborted (" << outcome.report.abort_kind << ") at t = "
         << *outcome.report.aborted_at << " in iteration " << iter << ": "
         << outcome.report.abort_message;
      throw SynthesisError(os.str(), log, std::move(outcome.trajectory));
    }

    const auto hit = first_obstacle(outcome.trajectory.t, outcome.trajectory.x, env.obstacles);
    if (!hit) {
      if (!outcome.report.accepted()) {
        throw SynthesisError(
            "trajectory clears every obstacle but violates funnel or state-space constraints",
            log, std::move(outcome.trajectory));
      }
      hooks.finish();
      return {std::move(mf), std::move(outcome.trajectory), std::move(outcome.report), iter,
              std::move(log)};
    }
    if (iter == params.max_iterations) {
      std::ostringstream os;
      os << "no obstacle-free trajectory after " << params.max_iterations
         << " circumvent insertions (still hitting obstacle " << hit->obstacle << ")";
      throw SynthesisError(os.str(), log, std::move(outcome.trajectory));
    }

    const ObstacleShape& obstacle = env.obstacles[static_cast<size_t>(hit->obstacle)];

    /* Re-violation of an obstacle with a window meeting the existing
     * bump's padded window widens that bump instead of stacking another. */
    CircumventFn* existing = nullptr;
    for (auto& cf : mf.circumvents) {
      if (cf.obstacle != hit->obstacle) continue;
      if (hit->t_lo - params.delta_t <= cf.window_hi + params.delta_t &&
          cf.window_lo - params.delta_t <= hit->t_hi + params.delta_t) {
        existing = &cf;
        break;
      }
    }

    ChoiceLogEntry entry;
    entry.obstacle = hit->obstacle;
    if (existing) {
      const std::pair<double, double> merged{std::min(existing->window_lo, hit->t_lo),
                                             std::max(existing->window_hi, hit->t_hi)};
      if (merged.first == existing->window_lo && merged.second == existing->window_hi) {
        std::ostringstream os;
        os << "obstacle " << hit->obstacle << " is re-violated inside its circumvent window ["
           << merged.first << ", " << merged.second
           << "]; the bump does not clear the obstacle (k_bump too large for this window?)";
        throw SynthesisError(os.str(), log, std::move(outcome.trajectory));
      }
      *existing = make_circumvent(env, obstacle, hit->obstacle, existing->dim, existing->side,
                                  merged, params.delta_t, params.delta_B, params.k_bump);
      entry.dim = existing->dim;
      entry.side = existing->side;
      entry.widened = true;
      entry.window_lo = merged.first;
      entry.window_hi = merged.second;
    } else {
      const auto [dim_i, side] = hooks.pick(last_traj, hit->obstacle, obstacle);
      mf.circumvents.push_back(make_circumvent(env, obstacle, hit->obstacle, dim_i, side,
                                               {hit->t_lo, hit->t_hi}, params.delta_t,
                                               params.delta_B, params.k_bump));
      entry.dim = dim_i;
      entry.side = side;
      entry.widened = false;
      entry.window_lo = hit->t_lo;
      entry.window_hi = hit->t_hi;
    }
    log.push_back(entry);
    hooks.observe(entry);

    /* Theorem 2 precondition: the initial state must still sit inside the
     * modified funnel after the change. */
    const GammaBundle g0 = mf.eval_gamma_values(Vec::Zero(n), 0.0);
    for (int i = 0; i < n; ++i) {
      if (!(g0.lo[i] < x0[i] && x0[i] < g0.hi[i])) {
        std::ostringstream os;
        os << "circumvent for obstacle " << hit->obstacle << " excludes x0 on dimension " << i
           << " at t = 0 (funnel [" << g0.lo[i] << ", " << g0.hi[i] << "], x0 = " << x0[i]
           << ")";
        throw SynthesisError(os.str(), log, std::move(last_traj));
      }
    }
  }
  throw SynthesisError("unreachable", log, std::move(last_traj));
}

}  // namespace

SynthesisResult synthesize(const Environment& env, const Plant& plant, const Vec& x0,
                           const SynthesisParams& params) {
  SelectionRng rng(params.seed);
  ChoiceHooks hooks;
  hooks.pick = [&](const Trajectory& traj, int, const ObstacleShape& obstacle) {
    const int dim_i = select_dimension(traj.t, traj.x, obstacle, traj.step, rng);
    const Side side =
        select_side(project(obstacle, dim_i), project(env.state_space, dim_i), rng);
    return std::make_pair(dim_i, side);
  };
  hooks.observe = [](const ChoiceLogEntry&) {};
  hooks.finish = []() {};
  return run_loop(env, plant, x0, params, hooks);
}

SynthesisResult replay(const Environment& env, const Plant& plant, const Vec& x0,
                       const std::vector<ChoiceLogEntry>& choice_log,
                       const SynthesisParams& params) {
  size_t next = 0;
  ChoiceHooks hooks;
  hooks.pick = [&](const Trajectory&, int obstacle_idx, const ObstacleShape& obstacle) {
    if (next >= choice_log.size()) {
      throw ReplayError("choice log exhausted before the loop converged");
    }
    const ChoiceLogEntry& e = choice_log[next];
    if (e.widened) {
      throw ReplayError("log expects a widening but a fresh circumvent is required");
    }
    if (e.obstacle != obstacle_idx) {
      std::ostringstream os;
      os << "log names obstacle " << e.obstacle << " but the trajectory first hits "
         << obstacle_idx;
      throw ReplayError(os.str());
    }
    if (e.dim < 0 || e.dim >= obstacle.dim()) {
      throw ReplayError("logged dimension " + std::to_string(e.dim) +
                        " is invalid for the obstacle");
    }
    const auto forced = forced_side(project(obstacle, e.dim), project(env.state_space, e.dim));
    if (forced && *forced != e.side) {
      throw ReplayError("logged side contradicts the forced side for a wall obstacle");
    }
    return std::make_pair(e.dim, e.side);
  };
  hooks.observe = [&](const ChoiceLogEntry& committed) {
    if (next >= choice_log.size()) {
      throw ReplayError("choice log exhausted before the loop converged");
    }
    if (!(committed == choice_log[next])) {
      std::ostringstream os;
      os << "replayed event " << next << " diverged from the log";
      throw ReplayError(os.str());
    }
    ++next;
  };
  hooks.finish = [&]() {
    if (next != choice_log.size()) {
      throw ReplayError("choice log has unused entries; it does not match this run");
    }
  };
  return run_loop(env, plant, x0, params, hooks);
}

}  // namespace fras
