#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "fras/geometry.hpp"

namespace fras {

enum class Side { Lower, Upper };

const char* side_name(Side s);

struct BetaEval {
  double value;
  double dot;
};

/* Compactly supported bump grafted onto one funnel boundary:
 *
 *   beta(t) = base +/- B exp(-k (t-m)^2 / (r^2 - (t-m)^2))   for |t-m| < r
 *   beta(t) = base                                            otherwise
 *
 * base is the state-space bound of the affected dimension, so outside the
 * activity window the bump leaves the funnel untouched. Both the value and
 * the derivative go to zero at the window edge. */
struct CircumventFn {
  int dim = 0;
  Side side = Side::Lower;
  double amplitude = 0.0;   // B
  double mid = 0.0;         // m, window midpoint
  double half_width = 0.0;  // r > 0, includes the delta_t padding
  double smoothness = 0.0;  // k > 0
  double base = 0.0;

  /* Raw (unpadded) intersection window, kept so overlapping re-violations
   * of the same obstacle widen this bump instead of stacking a new one. */
  double window_lo = 0.0;
  double window_hi = 0.0;
  int obstacle = -1;

  double t_act_lo() const { return mid - half_width; }
  double t_act_hi() const { return mid + half_width; }
  BetaEval eval(double t) const;
};

/* Seeded source for the randomized dimension/side choices. The same seed
 * yields the same choice sequence on every platform. */
class SelectionRng {
public:
  explicit SelectionRng(std::uint64_t seed) : gen_(seed) {}

  /* Uniform draw from {0, ..., k-1} via rejection sampling. */
  int uniform_below(int k);
  std::uint64_t draws() const { return draws_; }

private:
  std::mt19937_64 gen_;
  std::uint64_t draws_ = 0;
};

struct ObstacleHit {
  int obstacle;
  double t_lo;
  double t_hi;
};

/* Obstacle with the earliest trajectory entry time and its window.
 * Absent when no obstacle is intersected (the trajectory is already safe). */
std::optional<ObstacleHit> first_obstacle(const Eigen::Ref<const Eigen::VectorXd>& times,
                                          const Eigen::Ref<const SampleMatrix>& states,
                                          std::span<const ObstacleShape> obstacles);

/* Dimension whose projection the trajectory enters first; ties within one
 * sample step are broken uniformly at random. */
int select_dimension(const Eigen::Ref<const Eigen::VectorXd>& times,
                     const Eigen::Ref<const SampleMatrix>& states,
                     const ObstacleShape& obstacle, double step, SelectionRng& rng);

/* Forced when the obstacle touches a state-space face (wall case), random
 * otherwise. Touching both faces leaves no side to pass on. */
Side select_side(const Interval& obstacle_proj, const Interval& space_proj, SelectionRng& rng);

/* Returns the forced side if the obstacle touches a state-space face. */
std::optional<Side> forced_side(const Interval& obstacle_proj, const Interval& space_proj);

CircumventFn make_circumvent(const Environment& env, const ObstacleShape& obstacle,
                             int obstacle_index, int dim_i, Side side,
                             std::pair<double, double> window, double delta_t, double delta_B,
                             double k_bump);

}  // namespace fras
