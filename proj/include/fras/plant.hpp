#pragma once

#include <functional>
#include <string>

#include "fras/geometry.hpp"

namespace fras {

/* Control-affine plant xdot = f(x) + g(x) u. f and g are exposed
 * separately because the control law needs g on its own. */
struct Plant {
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> g;
  std::string label;
};

/* f(x) + g(x) u, with dimension and finiteness checks. The smallest
 * eigenvalue of g g^T is checked at the evaluated state: positive
 * definiteness is the caller's standing obligation and failing it here
 * gives a direct diagnostic instead of a singular pseudo-inverse later. */
Vec eval_dynamics(const Plant& plant, const Vec& x, const Vec& u);

/* f = 0, g = I, m = n. */
Plant builtin_single_integrator(int n);

/* Three-wheeled omnidirectional robot on a plane, state (x, y, theta):
 * g is the rotation-like matrix
 *   [ cos th   sin th   0 ]
 *   [ sin th  -cos th   0 ]
 *   [   0        0      1 ]
 * whose rows are orthonormal, so g g^T = I for every heading. */
Plant builtin_omni_robot();

/* Lookup by config name: "single_integrator_<n>d" or "omni_robot". */
Plant plant_by_name(const std::string& name);

}  // namespace fras
