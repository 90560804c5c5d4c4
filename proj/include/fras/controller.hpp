#pragma once

#include "fras/adaptive_funnel.hpp"
#include "fras/plant.hpp"

namespace fras {

/* Two readings of the xi denominator: per-dimension 1 - e_i^2 (default;
 * diverges exactly when a dimension hits its own bound) or the shared
 * 1 - e^T e. */
enum class XiVariant { Elementwise, Scalar };

struct ControllerGain {
  double k = 1.0;
  XiVariant xi_variant = XiVariant::Elementwise;
};

struct ControlOutput {
  Vec u;
  /* Snapshot for diagnostics and reports. */
  Vec e;
  Vec eps;
  Vec xi;
  Vec bound_diff_dot;
};

/* G^T (G G^T)^{-1}; requires G G^T positive definite. */
Mat right_pseudoinverse(const Mat& G);

/* Barrier law on explicit bounds:
 *   u = -G^+ (k xi .* eps - 1/2 d_dot .* e)
 * with e, eps, xi from the bounds at the evaluated state. Both control
 * operations below route through this, so they agree exactly whenever
 * they are handed the same bounds. */
ControlOutput barrier_control(const Plant& plant, const Vec& lo, const Vec& hi,
                              const Vec& lo_dot, const Vec& hi_dot, const ControllerGain& gain,
                              const Vec& x);

/* Reachability law on the reach funnel. */
ControlOutput reach_control(const Plant& plant, const ReachFunnel& funnel,
                            const ControllerGain& gain, const Vec& x, double t);

/* Reach-avoid-stay law on the modified funnel; evaluates the adaptive law
 * for the gamma derivatives. */
ControlOutput ras_control(const Plant& plant, const ModifiedFunnel& mf, const Vec& alpha,
                          const ControllerGain& gain, const Vec& x, double t);

}  // namespace fras
