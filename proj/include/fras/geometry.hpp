#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fras/errors.hpp"

namespace fras {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/* Per-sample rows are contiguous so the scan kernels stream them. */
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/* Open interval (lo, hi); degenerate intervals are rejected. Membership
 * tests treat the closure (sets are compact). */
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_);
  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct HyperRectangle {
  std::vector<Interval> dims;

  explicit HyperRectangle(std::vector<Interval> dims_);
  static HyperRectangle from_bounds(const Vec& lo, const Vec& hi);

  int dim() const { return static_cast<int>(dims.size()); }
  Vec lower() const;
  Vec upper() const;
  Vec midpoint() const;
  /* Closed membership of the leading dim() coordinates of x. */
  bool contains_leading(const Vec& x) const;
  /* Closed membership; requires dim(x) == dim(). */
  bool contains(const Vec& x) const;
};

struct Ball {
  Vec center;
  double radius;

  Ball(Vec center_, double radius_);
  int dim() const { return static_cast<int>(center.size()); }
};

/* Convex, compact, connected unsafe set: axis-aligned box or ball.
 *
 * A shape of dimension k <= n constrains the leading k state coordinates
 * and is unbounded in the rest. This is how a planar arena is expressed
 * for plants whose state carries extra coordinates (e.g. heading).
 */
class ObstacleShape {
public:
  static ObstacleShape rect(HyperRectangle r);
  static ObstacleShape ball(Vec center, double radius);

  int dim() const;
  bool is_rect() const { return std::holds_alternative<HyperRectangle>(shape_); }
  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  const HyperRectangle& as_rect() const { return std::get<HyperRectangle>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }

private:
  explicit ObstacleShape(std::variant<HyperRectangle, Ball> s) : shape_(std::move(s)) {}
  std::variant<HyperRectangle, Ball> shape_;
};

/* Projection of the set onto dimension i (0-based): [min, max] of the
 * i-th coordinate over the set. */
Interval project(const ObstacleShape& shape, int i);
Interval project(const HyperRectangle& rect, int i);

/* Closed membership of x (dim(x) >= shape.dim(); leading coords tested). */
bool contains(const ObstacleShape& shape, const Vec& x);

/* Componentwise min/max of all projections. All sets must share a dimension. */
HyperRectangle hull(std::span<const ObstacleShape> sets);

/* The problem instance: state-space box X, target box T, unsafe sets U^j. */
struct Environment {
  HyperRectangle state_space;
  HyperRectangle target;
  std::vector<ObstacleShape> obstacles;

  Environment(HyperRectangle state_space_, HyperRectangle target_,
              std::vector<ObstacleShape> obstacles_);

  int dim() const { return state_space.dim(); }
  /* True iff x is inside some obstacle; index of the first one via out param. */
  bool in_unsafe(const Vec& x, int* which = nullptr) const;
};

/* Time window over which a sampled trajectory meets an obstacle:
 * (inf, sup) of sample times whose state lies in the set, on the sampled
 * grid. Absent when no sample intersects. states is samples x n. */
std::optional<std::pair<double, double>> intersection_window(
    const Eigen::Ref<const Eigen::VectorXd>& times,
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle);

}  // namespace fras
