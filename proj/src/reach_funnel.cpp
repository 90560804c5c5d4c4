#include "fras/reach_funnel.hpp"

#include <cmath>
#include <sstream>

namespace fras {

RhoEval ReachFunnel::eval_rho(int i, double t) const {
  if (i < 0 || i >= dim()) throw DimensionError("funnel dimension index out of range");
  if (t < 0.0) throw ParameterError("funnel evaluated at negative time");
  const double span = kRho0 - rho_inf[i];
  const double decay_term = span * std::exp(-decay[i] * t);
  return {decay_term + rho_inf[i], -decay[i] * decay_term};
}

FunnelBounds ReachFunnel::bounds(double t) const {
  const int n = dim();
  FunnelBounds b{Vec(n), Vec(n), Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    const RhoEval r = eval_rho(i, t);
    b.lo[i] = -c_lo[i] * r.value + eta[i];
    b.hi[i] = c_hi[i] * r.value + eta[i];
    b.lo_dot[i] = -c_lo[i] * r.dot;
    b.hi_dot[i] = c_hi[i] * r.dot;
  }
  return b;
}

Vec default_eta(const Environment& env) { return env.target.midpoint(); }

ReachFunnel make_reach_funnel(const Environment& env, const Vec& eta, const Vec& decay,
                              const Vec& rho_inf) {
  const int n = env.dim();
  if (eta.size() != n || decay.size() != n || rho_inf.size() != n) {
    throw DimensionError("funnel parameter vectors must match the state dimension");
  }
  ReachFunnel f;
  f.eta = eta;
  f.rho_inf = rho_inf;
  f.decay = decay;
  f.c_lo = Vec(n);
  f.c_hi = Vec(n);
  for (int i = 0; i < n; ++i) {
    const auto& t = env.target.dims[static_cast<size_t>(i)];
    const auto& x = env.state_space.dims[static_cast<size_t>(i)];
    if (!(t.lo < eta[i] && eta[i] < t.hi)) {
      std::ostringstream os;
      os << "eta[" << i << "] = " << eta[i] << " is not interior to the target ["
         << t.lo << ", " << t.hi << "]";
      throw ParameterError(os.str());
    }
    f.c_lo[i] = eta[i] - x.lo;
    f.c_hi[i] = x.hi - eta[i];
    if (!(f.c_lo[i] > 0.0 && f.c_hi[i] > 0.0)) {
      throw ParameterError("eta must be strictly interior to the state space");
    }
    if (!(decay[i] >= 0.0)) throw ParameterError("decay rates must be >= 0");
    /* Distance from eta_i to the nearest target face: the only reading of
     * the asymptote bound under which the limit tube lands inside T. */
    const double dist = std::min(eta[i] - t.lo, t.hi - eta[i]);
    const double limit = std::min(ReachFunnel::kRho0, dist / std::max(f.c_lo[i], f.c_hi[i]));
    if (!(rho_inf[i] > 0.0 && rho_inf[i] < limit)) {
      std::ostringstream os;
      os << "rho_inf[" << i << "] = " << rho_inf[i] << " outside the admissible range (0, "
         << limit << ")";
      throw ParameterError(os.str());
    }
  }
  if (env.in_unsafe(eta)) {
    throw ParameterError("eta lies inside an obstacle; pick another attractor");
  }
  return f;
}

Vec normalized_error(const Vec& x, const Vec& lo, const Vec& hi) {
  if (x.size() != lo.size() || x.size() != hi.size()) {
    throw DimensionError("normalized_error dimension mismatch");
  }
  Vec e(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(lo[i] < hi[i])) throw ParameterError("funnel bounds out of order");
    e[i] = (x[i] - 0.5 * (hi[i] + lo[i])) / (0.5 * (hi[i] - lo[i]));
  }
  return e;
}

Vec transformed_error(const Vec& e) {
  Vec eps(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (!(std::abs(e[i]) < 1.0)) {
      std::ostringstream os;
      os << "normalized error e[" << i << "] = " << e[i]
         << " leaves (-1, 1); the control law is undefined outside the funnel";
      throw FunnelViolationError(os.str());
    }
    eps[i] = std::log((1.0 + e[i]) / (1.0 - e[i]));
  }
  return eps;
}

Vec xi_diagonal(const Vec& e, const Vec& rho_d) {
  if (e.size() != rho_d.size()) throw DimensionError("xi_diagonal dimension mismatch");
  Vec xi(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (!(std::abs(e[i]) < 1.0)) {
      throw FunnelViolationError("xi undefined at |e_i| >= 1");
    }
    if (!(rho_d[i] > 0.0)) throw ParameterError("rho_d must be positive");
    xi[i] = 4.0 / (rho_d[i] * (1.0 - e[i] * e[i]));
  }
  return xi;
}

}  // namespace fras
