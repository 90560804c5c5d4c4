#include "fras/adaptive_funnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fras {

void AdaptiveParams::validate() const {
  if (!(mu > 0.0 && kappa > 0.0 && theta0 > 0.0 && nu > 0.0 && s > 0.0)) {
    throw ParameterError("adaptive parameters mu, kappa, theta0, nu, s must all be positive");
  }
}

double default_nu(const Environment& env) {
  double longest = 0.0;
  for (const auto& iv : env.state_space.dims) longest = std::max(longest, iv.length());
  return 50.0 / longest;
}

double default_trigger_slope(double mu) { return 10.0 / mu; }

double smooth_max(double a, double b, double nu) {
  if (!(nu > 0.0)) throw ParameterError("smooth_max needs nu > 0");
  const double w = std::max(a, b);
  return w + std::log(std::exp(nu * (a - w)) + std::exp(nu * (b - w))) / nu;
}

double smooth_min(double a, double b, double nu) { return -smooth_max(-a, -b, nu); }

SmoothEval smooth_max_with_dot(double a, double a_dot, double b, double b_dot, double nu) {
  if (!(nu > 0.0)) throw ParameterError("smooth_max needs nu > 0");
  const double w = std::max(a, b);
  const double ea = std::exp(nu * (a - w));
  const double eb = std::exp(nu * (b - w));
  const double sum = ea + eb;
  return {w + std::log(sum) / nu, (ea * a_dot + eb * b_dot) / sum};
}

SmoothEval smooth_min_with_dot(double a, double a_dot, double b, double b_dot, double nu) {
  const SmoothEval neg = smooth_max_with_dot(-a, -a_dot, -b, -b_dot, nu);
  return {-neg.value, -neg.dot};
}

bool ModifiedFunnel::has_lower(int i) const {
  for (const auto& cf : circumvents) {
    if (cf.dim == i && cf.side == Side::Lower) return true;
  }
  return false;
}

bool ModifiedFunnel::has_upper(int i) const {
  for (const auto& cf : circumvents) {
    if (cf.dim == i && cf.side == Side::Upper) return true;
  }
  return false;
}

std::vector<int> ModifiedFunnel::dual_side_dims() const {
  std::vector<int> dims;
  for (int i = 0; i < dim(); ++i) {
    if (has_lower(i) && has_upper(i)) dims.push_back(i);
  }
  return dims;
}

double ModifiedFunnel::eval_psi(int i, double t) const {
  double psi = std::numeric_limits<double>::infinity();
  bool any = false;
  RhoEval rho{0.0, 0.0};
  for (const auto& cf : circumvents) {
    if (cf.dim != i) continue;
    if (!any) rho = reach.eval_rho(i, t);
    any = true;
    const double beta = cf.eval(t).value;
    /* Conflict is measured against the opposite *reach* bound. */
    const double margin = (cf.side == Side::Lower)
                              ? (reach.c_hi[i] * rho.value + reach.eta[i]) - beta
                              : beta - (-reach.c_lo[i] * rho.value + reach.eta[i]);
    psi = std::min(psi, margin - params.mu);
  }
  return psi;
}

Vec ModifiedFunnel::psi_all(double t) const {
  Vec psi(dim());
  for (int i = 0; i < dim(); ++i) psi[i] = eval_psi(i, t);
  return psi;
}

Vec ModifiedFunnel::alpha_dot(const Vec& alpha, double t) const {
  if (alpha.size() != dim()) throw DimensionError("alpha dimension mismatch");
  Vec dot(dim());
  for (int i = 0; i < dim(); ++i) {
    if (!has_circumvent(i)) {
      dot[i] = -params.kappa * alpha[i];
      continue;
    }
    const double psi = eval_psi(i, t);
    const double gap = psi + alpha[i];
    if (!(gap > params.eps_gap())) {
      std::ostringstream os;
      os << "psi_" << i << " + alpha_" << i << " = " << gap << " fell below the gap guard "
         << params.eps_gap() << " at t = " << t
         << "; the adaptive law cannot keep the funnel open with these parameters";
      throw AdaptiveSingularityError(os.str());
    }
    const double theta = params.theta0 * (1.0 - std::tanh(params.s * psi));
    dot[i] = theta / gap - params.kappa * alpha[i];
  }
  return dot;
}

namespace {

GammaBundle eval_gamma_impl(const ModifiedFunnel& mf, const Vec& alpha, const Vec& alpha_dot,
                            double t) {
  const int n = mf.dim();
  if (alpha.size() != n || alpha_dot.size() != n) {
    throw DimensionError("alpha dimension mismatch");
  }
  const FunnelBounds rb = mf.reach.bounds(t);
  GammaBundle g{rb.lo, rb.hi, rb.lo_dot, rb.hi_dot, Vec(n), Vec(n), Vec(n), Vec(n)};

  for (const auto& cf : mf.circumvents) {
    const BetaEval beta = cf.eval(t);
    const int i = cf.dim;
    if (cf.side == Side::Lower) {
      const SmoothEval folded =
          smooth_max_with_dot(g.lo[i], g.lo_dot[i], beta.value, beta.dot, mf.params.nu);
      g.lo[i] = folded.value;
      g.lo_dot[i] = folded.dot;
    } else {
      const SmoothEval folded =
          smooth_min_with_dot(g.hi[i], g.hi_dot[i], beta.value, beta.dot, mf.params.nu);
      g.hi[i] = folded.value;
      g.hi_dot[i] = folded.dot;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (mf.has_lower(i)) {
      g.hi[i] += alpha[i];
      g.hi_dot[i] += alpha_dot[i];
    }
    if (mf.has_upper(i)) {
      g.lo[i] -= alpha[i];
      g.lo_dot[i] -= alpha_dot[i];
    }
    if (!(g.lo[i] < g.hi[i])) {
      std::ostringstream os;
      os << "funnel collapsed on dimension " << i << " at t = " << t << ": gamma_L = " << g.lo[i]
         << " >= gamma_U = " << g.hi[i];
      throw FunnelCollapseError(os.str());
    }
    g.sum[i] = g.hi[i] + g.lo[i];
    g.diff[i] = g.hi[i] - g.lo[i];
    g.sum_dot[i] = g.hi_dot[i] + g.lo_dot[i];
    g.diff_dot[i] = g.hi_dot[i] - g.lo_dot[i];
  }
  return g;
}

}  // namespace

GammaBundle ModifiedFunnel::eval_gamma(const Vec& alpha, const Vec& alpha_dot, double t) const {
  return eval_gamma_impl(*this, alpha, alpha_dot, t);
}

GammaBundle ModifiedFunnel::eval_gamma_values(const Vec& alpha, double t) const {
  return eval_gamma_impl(*this, alpha, Vec::Zero(dim()), t);
}

}  // namespace fras
