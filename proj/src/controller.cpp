#include "fras/controller.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace fras {

Mat right_pseudoinverse(const Mat& G) {
  const Mat M = G * G.transpose();
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) {
    throw ModelError("g(x) g(x)^T is numerically singular; the right pseudo-inverse needs it "
                     "positive definite");
  }
  /* M is symmetric, so (M^{-1} G)^T = G^T M^{-1}. */
  return llt.solve(G).transpose();
}

ControlOutput barrier_control(const Plant& plant, const Vec& lo, const Vec& hi,
                              const Vec& lo_dot, const Vec& hi_dot, const ControllerGain& gain,
                              const Vec& x) {
  if (!(gain.k > 0.0)) throw ParameterError("controller gain k must be positive");
  if (x.size() != plant.n) throw DimensionError("state dimension mismatch");

  ControlOutput out;
  out.e = normalized_error(x, lo, hi);
  out.eps = transformed_error(out.e);
  const Vec d = hi - lo;
  out.bound_diff_dot = hi_dot - lo_dot;

  if (gain.xi_variant == XiVariant::Elementwise) {
    out.xi = xi_diagonal(out.e, d);
  } else {
    const double shared = 1.0 - out.e.squaredNorm();
    if (!(shared > 0.0)) {
      throw FunnelViolationError("scalar xi variant undefined at |e| >= 1");
    }
    out.xi = Vec(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) out.xi[i] = 4.0 / (d[i] * shared);
  }

  const Vec force =
      gain.k * out.xi.cwiseProduct(out.eps) - 0.5 * out.bound_diff_dot.cwiseProduct(out.e);
  out.u = -right_pseudoinverse(plant.g(x)) * force;
  if (!out.u.allFinite()) throw ModelError("non-finite control value");
  return out;
}

ControlOutput reach_control(const Plant& plant, const ReachFunnel& funnel,
                            const ControllerGain& gain, const Vec& x, double t) {
  const FunnelBounds b = funnel.bounds(t);
  return barrier_control(plant, b.lo, b.hi, b.lo_dot, b.hi_dot, gain, x);
}

ControlOutput ras_control(const Plant& plant, const ModifiedFunnel& mf, const Vec& alpha,
                          const ControllerGain& gain, const Vec& x, double t) {
  const Vec a_dot = mf.alpha_dot(alpha, t);
  const GammaBundle g = mf.eval_gamma(alpha, a_dot, t);
  return barrier_control(plant, g.lo, g.hi, g.lo_dot, g.hi_dot, gain, x);
}

}  // namespace fras
