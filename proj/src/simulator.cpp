#include "fras/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fras {

void SimConfig::validate() const {
  if (!(h > 0.0)) throw ParameterError("step size h must be positive");
  if (!(horizon >= 0.0)) throw ParameterError("horizon must be non-negative");
  if (record_every < 1) throw ParameterError("record_every must be >= 1");
  if (max_substep_depth < 1 || max_substep_depth > 40) {
    throw ParameterError("max_substep_depth out of range");
  }
  if (!(substep_rtol > 0.0 && substep_atol > 0.0)) {
    throw ParameterError("substep tolerances must be positive");
  }
}

bool RunReport::operator==(const RunReport& o) const {
  auto vec_eq = [](const Vec& a, const Vec& b) {
    return a.size() == b.size() && (a.size() == 0 || (a.array() == b.array()).all());
  };
  return reached_target_at == o.reached_target_at &&
         obstacle_violations == o.obstacle_violations &&
         funnel_violations == o.funnel_violations &&
         state_space_violations == o.state_space_violations &&
         peak_control_norm == o.peak_control_norm && vec_eq(peak_alpha, o.peak_alpha) &&
         min_psi_plus_alpha == o.min_psi_plus_alpha && dual_side_dims == o.dual_side_dims &&
         aborted_at == o.aborted_at && abort_kind == o.abort_kind &&
         abort_message == o.abort_message;
}

Vec integrate_step(const DerivFn& deriv, const Vec& state, double t, double h) {
  auto stage = [&](const Vec& y, double ts, const char* name) {
    Vec d = deriv(y, ts);
    if (!d.allFinite()) {
      std::ostringstream os;
      os << "non-finite derivative at RK4 stage " << name << ", t = " << ts;
      throw IntegrationError(os.str());
    }
    return d;
  };
  const Vec k1 = stage(state, t, "k1");
  const Vec k2 = stage(state + 0.5 * h * k1, t + 0.5 * h, "k2");
  const Vec k3 = stage(state + 0.5 * h * k2, t + 0.5 * h, "k3");
  const Vec k4 = stage(state + h * k3, t + h, "k4");
  return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

/* Per-sample bookkeeping shared by the online (during simulation) and
 * offline (check_invariants / check_recorded) paths, so the two reports
 * agree except for the loops that feed them. */
class ReportBuilder {
public:
  ReportBuilder(const Environment& env, const ModifiedFunnel* mf, int n)
      : env_(env), mf_(mf), n_(n) {
    report_.peak_alpha = Vec::Zero(n);
    if (mf_) report_.dual_side_dims = mf_->dual_side_dims();
    first_obstacle_hit_.assign(env.obstacles.size(), -1.0);
    first_funnel_.assign(static_cast<size_t>(n), -1.0);
    first_space_.assign(static_cast<size_t>(n), -1.0);
  }

  void add_sample(double t, const Vec& x, const Vec& u, const Vec& lo, const Vec& hi,
                  const Vec& alpha) {
    for (int i = 0; i < n_; ++i) {
      if (!(lo[i] < x[i] && x[i] < hi[i]) && first_funnel_[static_cast<size_t>(i)] < 0.0) {
        first_funnel_[static_cast<size_t>(i)] = t;
      }
      const auto& sp = env_.state_space.dims[static_cast<size_t>(i)];
      if (!sp.contains(x[i]) && first_space_[static_cast<size_t>(i)] < 0.0) {
        first_space_[static_cast<size_t>(i)] = t;
      }
      report_.peak_alpha[i] = std::max(report_.peak_alpha[i], std::abs(alpha[i]));
    }
    for (size_t j = 0; j < env_.obstacles.size(); ++j) {
      if (first_obstacle_hit_[j] < 0.0 && contains(env_.obstacles[j], x)) {
        first_obstacle_hit_[j] = t;
      }
    }
    if (!report_.reached_target_at && env_.target.contains(x)) {
      report_.reached_target_at = t;
    }
    report_.peak_control_norm = std::max(report_.peak_control_norm, u.norm());
    if (mf_) {
      for (int i = 0; i < n_; ++i) {
        if (!mf_->has_circumvent(i)) continue;
        const double psi = mf_->eval_psi(i, t);
        if (psi < 0.0) {
          report_.min_psi_plus_alpha = std::min(report_.min_psi_plus_alpha, psi + alpha[i]);
        }
      }
    }
  }

  void mark_abort(double t, std::string kind, std::string message) {
    report_.aborted_at = t;
    report_.abort_kind = std::move(kind);
    report_.abort_message = std::move(message);
  }

  RunReport finish() {
    for (size_t j = 0; j < first_obstacle_hit_.size(); ++j) {
      if (first_obstacle_hit_[j] >= 0.0) {
        report_.obstacle_violations.push_back({static_cast<int>(j), first_obstacle_hit_[j]});
      }
    }
    for (int i = 0; i < n_; ++i) {
      if (first_funnel_[static_cast<size_t>(i)] >= 0.0) {
        report_.funnel_violations.push_back({i, first_funnel_[static_cast<size_t>(i)]});
      }
      if (first_space_[static_cast<size_t>(i)] >= 0.0) {
        report_.state_space_violations.push_back({i, first_space_[static_cast<size_t>(i)]});
      }
    }
    return std::move(report_);
  }

private:
  const Environment& env_;
  const ModifiedFunnel* mf_;
  int n_;
  RunReport report_;
  std::vector<double> first_obstacle_hit_;
  std::vector<double> first_funnel_;
  std::vector<double> first_space_;
};

/* Advance one grid cell, splitting it while the full-step/half-steps
 * difference is out of tolerance or a stage evaluation rejects (leaves the
 * funnel, trips the adaptive gap guard, or goes non-finite). */
Vec step_cell(const DerivFn& deriv, const Vec& y, double t, double h, int depth,
              const SimConfig& cfg) {
  Vec y_full, y_half;
  bool ok = true;
  std::string reject_reason;
  try {
    y_full = integrate_step(deriv, y, t, h);
    const Vec y_mid = integrate_step(deriv, y, t, 0.5 * h);
    y_half = integrate_step(deriv, y_mid, t + 0.5 * h, 0.5 * h);
  } catch (const Error& e) {
    ok = false;
    reject_reason = std::string(e.kind()) + ": " + e.what();
  }
  if (ok) {
    bool within = true;
    for (Eigen::Index i = 0; i < y.size() && within; ++i) {
      const double tol =
          cfg.substep_atol + cfg.substep_rtol * std::max(std::abs(y[i]), std::abs(y_full[i]));
      if (std::abs(y_full[i] - y_half[i]) > tol) within = false;
    }
    if (within) return y_full;
    reject_reason = "local error above tolerance";
  }
  if (depth >= cfg.max_substep_depth) {
    std::ostringstream os;
    os << "sub-stepping exhausted at t = " << t << " (cell width " << h << "): " << reject_reason;
    throw IntegrationError(os.str());
  }
  const Vec y_left = step_cell(deriv, y, t, 0.5 * h, depth + 1, cfg);
  return step_cell(deriv, y_left, t + 0.5 * h, 0.5 * h, depth + 1, cfg);
}

}  // namespace

SimOutcome simulate(const Plant& plant, const ModifiedFunnel& mf, const ControllerGain& gain,
                    const Environment& env, const Vec& x0, const SimConfig& cfg) {
  cfg.validate();
  mf.params.validate();
  const int n = plant.n;
  if (mf.dim() != n || env.dim() != n) throw DimensionError("plant/funnel/environment mismatch");
  if (x0.size() != n) throw DimensionError("initial state dimension mismatch");

  const Vec alpha0 = Vec::Zero(n);
  {
    const GammaBundle g0 = mf.eval_gamma_values(alpha0, 0.0);
    for (int i = 0; i < n; ++i) {
      if (!(g0.lo[i] < x0[i] && x0[i] < g0.hi[i])) {
        std::ostringstream os;
        os << "x0[" << i << "] = " << x0[i] << " is not strictly inside the funnel ["
           << g0.lo[i] << ", " << g0.hi[i] << "] at t = 0";
        throw FunnelViolationError(os.str());
      }
    }
  }

  auto deriv = [&](const Vec& z, double t) {
    const Vec x = z.head(n);
    const Vec alpha = z.tail(n);
    const Vec a_dot = mf.alpha_dot(alpha, t);
    const GammaBundle g = mf.eval_gamma(alpha, a_dot, t);
    const ControlOutput ctrl =
        barrier_control(plant, g.lo, g.hi, g.lo_dot, g.hi_dot, gain, x);
    Vec dz(2 * n);
    dz.head(n) = plant.f(x) + plant.g(x) * ctrl.u;
    dz.tail(n) = a_dot;
    return dz;
  };

  const auto n_cells = static_cast<std::int64_t>(std::floor(cfg.horizon / cfg.h + 1e-9));
  const std::int64_t max_samples = n_cells / cfg.record_every + 1;

  Trajectory traj;
  traj.t.resize(max_samples);
  traj.x.resize(max_samples, n);
  traj.u.resize(max_samples, plant.m);
  traj.gamma_lo.resize(max_samples, n);
  traj.gamma_hi.resize(max_samples, n);
  traj.alpha.resize(max_samples, n);
  traj.plant_label = plant.label;
  traj.step = cfg.h * cfg.record_every;

  ReportBuilder builder(env, &mf, n);

  Vec z(2 * n);
  z.head(n) = x0;
  z.tail(n) = alpha0;

  Eigen::Index row = 0;
  std::int64_t cell = 0;
  bool reached = false;
  try {
    while (true) {
      const double t = static_cast<double>(cell) * cfg.h;
      if (cell % cfg.record_every == 0) {
        const Vec x = z.head(n);
        const Vec alpha = z.tail(n);
        const Vec a_dot = mf.alpha_dot(alpha, t);
        const GammaBundle g = mf.eval_gamma(alpha, a_dot, t);
        const ControlOutput ctrl =
            barrier_control(plant, g.lo, g.hi, g.lo_dot, g.hi_dot, gain, x);
        traj.t[row] = t;
        traj.x.row(row) = x.transpose();
        traj.u.row(row) = ctrl.u.transpose();
        traj.gamma_lo.row(row) = g.lo.transpose();
        traj.gamma_hi.row(row) = g.hi.transpose();
        traj.alpha.row(row) = alpha.transpose();
        builder.add_sample(t, x, ctrl.u, g.lo, g.hi, alpha);
        ++row;
        if (cfg.stop_on_reach && env.target.contains(x)) reached = true;
      }
      if (cell >= n_cells || reached) break;
      if (cfg.stiff_substepping) {
        z = step_cell(deriv, z, t, cfg.h, 0, cfg);
      } else {
        z = integrate_step(deriv, z, t, cfg.h);
      }
      ++cell;
    }
  } catch (const Error& e) {
    builder.mark_abort(static_cast<double>(cell) * cfg.h, std::string(e.kind()), e.what());
  }

  traj.t.conservativeResize(row);
  traj.x.conservativeResize(row, n);
  traj.u.conservativeResize(row, plant.m);
  traj.gamma_lo.conservativeResize(row, n);
  traj.gamma_hi.conservativeResize(row, n);
  traj.alpha.conservativeResize(row, n);

  return {std::move(traj), builder.finish()};
}

RunReport check_invariants(const Trajectory& traj, const Environment& env,
                           const ModifiedFunnel& mf) {
  if (traj.samples() == 0) throw ParameterError("cannot check an empty trajectory");
  const int n = traj.state_dim();
  if (mf.dim() != n || env.dim() != n) throw DimensionError("trajectory/funnel dimension mismatch");
  ReportBuilder builder(env, &mf, n);
  for (Eigen::Index r = 0; r < traj.samples(); ++r) {
    const double t = traj.t[r];
    const Vec alpha = traj.alpha.row(r).transpose();
    const GammaBundle g = mf.eval_gamma_values(alpha, t);
    builder.add_sample(t, traj.x.row(r).transpose(), traj.u.row(r).transpose(), g.lo, g.hi,
                       alpha);
  }
  return builder.finish();
}

RunReport check_recorded(const Trajectory& traj, const Environment& env) {
  if (traj.samples() == 0) throw ParameterError("cannot check an empty trajectory");
  const int n = traj.state_dim();
  if (env.dim() != n) throw DimensionError("trajectory/environment dimension mismatch");
  ReportBuilder builder(env, nullptr, n);
  for (Eigen::Index r = 0; r < traj.samples(); ++r) {
    builder.add_sample(traj.t[r], traj.x.row(r).transpose(), traj.u.row(r).transpose(),
                       traj.gamma_lo.row(r).transpose(), traj.gamma_hi.row(r).transpose(),
                       traj.alpha.row(r).transpose());
  }
  return builder.finish();
}

}  // namespace fras
