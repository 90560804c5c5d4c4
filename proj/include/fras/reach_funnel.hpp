#pragma once

#include "fras/geometry.hpp"

namespace fras {

struct RhoEval {
  double value;
  double dot;
};

/* Time-varying funnel bounds and their derivatives, one entry per dimension. */
struct FunnelBounds {
  Vec lo;
  Vec hi;
  Vec lo_dot;
  Vec hi_dot;
};

/* Reachability funnel: per dimension the performance function
 *   rho_i(t) = (1 - rho_inf_i) e^{-l_i t} + rho_inf_i
 * shapes the tube  -c_lo_i rho_i(t) + eta_i < x_i < c_hi_i rho_i(t) + eta_i
 * which starts at the full state space and shrinks into the target. */
struct ReachFunnel {
  Vec eta;
  Vec rho_inf;
  Vec decay;  // l_i >= 0
  Vec c_lo;   // eta_i - Xlo_i
  Vec c_hi;   // Xhi_i - eta_i

  static constexpr double kRho0 = 1.0;

  int dim() const { return static_cast<int>(eta.size()); }
  RhoEval eval_rho(int i, double t) const;
  FunnelBounds bounds(double t) const;
};

/* Validates eta in int(T) and clear of obstacles, and rho_inf against its
 * admissible range  (0, min(1, dist(eta_i, dT_i) / max(c_lo_i, c_hi_i))). */
ReachFunnel make_reach_funnel(const Environment& env, const Vec& eta, const Vec& decay,
                              const Vec& rho_inf);

/* Componentwise midpoint of the target: the default attractor. */
Vec default_eta(const Environment& env);

/* e_i = (x_i - (hi_i + lo_i)/2) / ((hi_i - lo_i)/2); inside the funnel iff
 * every entry lies in (-1, 1). Out-of-range values are returned, not thrown. */
Vec normalized_error(const Vec& x, const Vec& lo, const Vec& hi);

/* eps_i = ln((1 + e_i)/(1 - e_i)); throws FunnelViolationError at |e_i| >= 1. */
Vec transformed_error(const Vec& e);

/* Diagonal of xi: 4 / (rho_d_i (1 - e_i^2)). */
Vec xi_diagonal(const Vec& e, const Vec& rho_d);

}  // namespace fras
