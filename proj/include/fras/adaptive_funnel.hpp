#pragma once

#include <vector>

#include "fras/circumvent.hpp"
#include "fras/reach_funnel.hpp"

namespace fras {

struct AdaptiveParams {
  double mu = 1.0;      // conflict tolerance between bump and opposite bound
  double kappa = 0.3;   // alpha decay rate
  double theta0 = 0.1;  // deviation gain
  double nu = 5.0;      // smooth max/min sharpness
  double s = 10.0;      // tanh slope of the smoothed trigger

  void validate() const;
  /* Numeric floor for psi_i + alpha_i; falling below it means the
   * adaptive law's well-posedness premise failed numerically. */
  double eps_gap() const { return 1e-6 * mu; }
};

/* nu default: caps the smooth-max slack ln2/nu at a small fraction of the
 * arena scale. */
double default_nu(const Environment& env);
/* Trigger slope default: transition width is a fixed fraction of mu. */
double default_trigger_slope(double mu);

struct SmoothEval {
  double value;
  double dot;
};

/* Log-sum-exp approximations of max/min: smooth_max(a,b) lies within
 * [max(a,b), max(a,b) + ln2/nu]; smooth_min mirrors below the min.
 * Inputs are shifted by the true max before exponentiation. */
double smooth_max(double a, double b, double nu);
double smooth_min(double a, double b, double nu);
/* Time-derivative forms: the softmax-weighted combination of a_dot, b_dot. */
SmoothEval smooth_max_with_dot(double a, double a_dot, double b, double b_dot, double nu);
SmoothEval smooth_min_with_dot(double a, double a_dot, double b, double b_dot, double nu);

/* gamma_L, gamma_U and the derived gamma_s = gamma_U + gamma_L,
 * gamma_d = gamma_U - gamma_L (diagonal entries), with time derivatives. */
struct GammaBundle {
  Vec lo;
  Vec hi;
  Vec lo_dot;
  Vec hi_dot;
  Vec sum;
  Vec diff;
  Vec sum_dot;
  Vec diff_dot;
};

/* Reach funnel composed with the accumulated circumvent functions.
 * Lower-side bumps fold into gamma_L through iterated smooth_max, upper-side
 * bumps into gamma_U through smooth_min, and each affected dimension's
 * opposite bound is shifted by the adaptive state alpha. */
struct ModifiedFunnel {
  ReachFunnel reach;
  std::vector<CircumventFn> circumvents;
  AdaptiveParams params;

  int dim() const { return reach.dim(); }
  bool has_lower(int i) const;
  bool has_upper(int i) const;
  bool has_circumvent(int i) const { return has_lower(i) || has_upper(i); }
  /* Dimensions carrying bumps on both sides at once; the alpha shift is
   * applied to both bounds there and the case is flagged in run reports. */
  std::vector<int> dual_side_dims() const;

  /* Conflict margin between a bump and the opposite reach bound, minus mu.
   * Minimum over the dimension's circumvents; +inf when it has none. */
  double eval_psi(int i, double t) const;
  Vec psi_all(double t) const;

  /* Right-hand side of the adaptive law
   *   alpha_dot_i = theta_i / (psi_i + alpha_i) - kappa alpha_i,
   * theta_i = theta0 (1 - tanh(s psi_i)). Throws AdaptiveSingularityError
   * when psi_i + alpha_i <= eps_gap on a circumvented dimension. */
  Vec alpha_dot(const Vec& alpha, double t) const;

  GammaBundle eval_gamma(const Vec& alpha, const Vec& alpha_dot, double t) const;
  /* Bound values only (derivative slots zeroed); never touches the
   * adaptive law, so it is safe for offline checking. */
  GammaBundle eval_gamma_values(const Vec& alpha, double t) const;
};

}  // namespace fras
