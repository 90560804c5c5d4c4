#include "fras/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fras/scan.hpp"

namespace fras {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo < hi)) {
    std::ostringstream os;
    os << "interval [" << lo_ << ", " << hi_ << "] is degenerate (need lo < hi)";
    throw ParameterError(os.str());
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ParameterError("interval bounds must be finite");
  }
}

HyperRectangle::HyperRectangle(std::vector<Interval> dims_) : dims(std::move(dims_)) {
  if (dims.empty()) throw ParameterError("hyper-rectangle needs at least one dimension");
}

HyperRectangle HyperRectangle::from_bounds(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size()) throw DimensionError("bound vectors differ in length");
  std::vector<Interval> ivs;
  ivs.reserve(static_cast<size_t>(lo.size()));
  for (Eigen::Index i = 0; i < lo.size(); ++i) ivs.emplace_back(lo[i], hi[i]);
  return HyperRectangle(std::move(ivs));
}

Vec HyperRectangle::lower() const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = dims[static_cast<size_t>(i)].lo;
  return v;
}

Vec HyperRectangle::upper() const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = dims[static_cast<size_t>(i)].hi;
  return v;
}

Vec HyperRectangle::midpoint() const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = dims[static_cast<size_t>(i)].midpoint();
  return v;
}

bool HyperRectangle::contains_leading(const Vec& x) const {
  if (x.size() < dim()) throw DimensionError("state has fewer coordinates than the box");
  for (int i = 0; i < dim(); ++i) {
    if (!dims[static_cast<size_t>(i)].contains(x[i])) return false;
  }
  return true;
}

bool HyperRectangle::contains(const Vec& x) const {
  if (x.size() != dim()) throw DimensionError("state/box dimension mismatch");
  return contains_leading(x);
}

Ball::Ball(Vec center_, double radius_) : center(std::move(center_)), radius(radius_) {
  if (center.size() == 0) throw ParameterError("ball center must be non-empty");
  if (!(radius > 0.0)) throw ParameterError("ball radius must be strictly positive");
}

ObstacleShape ObstacleShape::rect(HyperRectangle r) { return ObstacleShape(std::move(r)); }

ObstacleShape ObstacleShape::ball(Vec center, double radius) {
  return ObstacleShape(Ball(std::move(center), radius));
}

int ObstacleShape::dim() const {
  if (is_rect()) return as_rect().dim();
  return as_ball().dim();
}

Interval project(const HyperRectangle& rect, int i) {
  if (i < 0 || i >= rect.dim()) throw DimensionError("projection index out of range");
  return rect.dims[static_cast<size_t>(i)];
}

Interval project(const ObstacleShape& shape, int i) {
  if (i < 0 || i >= shape.dim()) throw DimensionError("projection index out of range");
  if (shape.is_rect()) return shape.as_rect().dims[static_cast<size_t>(i)];
  const Ball& b = shape.as_ball();
  return Interval(b.center[i] - b.radius, b.center[i] + b.radius);
}

bool contains(const ObstacleShape& shape, const Vec& x) {
  const int k = shape.dim();
  if (x.size() < k) throw DimensionError("state has fewer coordinates than the obstacle");
  if (shape.is_rect()) return shape.as_rect().contains_leading(x);
  const Ball& b = shape.as_ball();
  return (x.head(k) - b.center).norm() <= b.radius;
}

HyperRectangle hull(std::span<const ObstacleShape> sets) {
  if (sets.empty()) throw ParameterError("hull of an empty set list");
  const int n = sets.front().dim();
  for (const auto& s : sets) {
    if (s.dim() != n) throw DimensionError("hull over sets of mixed dimension");
  }
  std::vector<Interval> ivs;
  ivs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : sets) {
      Interval p = project(s, i);
      lo = std::min(lo, p.lo);
      hi = std::max(hi, p.hi);
    }
    ivs.emplace_back(lo, hi);
  }
  return HyperRectangle(std::move(ivs));
}

Environment::Environment(HyperRectangle state_space_, HyperRectangle target_,
                         std::vector<ObstacleShape> obstacles_)
    : state_space(std::move(state_space_)),
      target(std::move(target_)),
      obstacles(std::move(obstacles_)) {
  const int n = state_space.dim();
  if (target.dim() != n) throw DimensionError("target/state-space dimension mismatch");
  for (int i = 0; i < n; ++i) {
    const auto& t = target.dims[static_cast<size_t>(i)];
    const auto& x = state_space.dims[static_cast<size_t>(i)];
    if (t.lo < x.lo || t.hi > x.hi) {
      throw ParameterError("target is not contained in the state space (dimension " +
                           std::to_string(i) + ")");
    }
  }
  for (size_t j = 0; j < obstacles.size(); ++j) {
    const auto& obs = obstacles[j];
    if (obs.dim() > n) throw DimensionError("obstacle " + std::to_string(j) +
                                            " has more dimensions than the state space");
    for (int i = 0; i < obs.dim(); ++i) {
      Interval p = project(obs, i);
      const auto& x = state_space.dims[static_cast<size_t>(i)];
      if (p.lo < x.lo - 1e-12 || p.hi > x.hi + 1e-12) {
        throw ParameterError("obstacle " + std::to_string(j) +
                             " leaves the state space (dimension " + std::to_string(i) + ")");
      }
    }
  }
  /* int(T \ U) must be non-empty so an attractor eta can be picked.
   * Probed on a deterministic interior grid. */
  const int n_pts = std::max(3, static_cast<int>(std::floor(std::pow(4096.0, 1.0 / n))));
  std::vector<int> idx(static_cast<size_t>(n), 0);
  bool found = false;
  while (!found) {
    Vec p(n);
    for (int i = 0; i < n; ++i) {
      const auto& t = target.dims[static_cast<size_t>(i)];
      const double frac = (idx[static_cast<size_t>(i)] + 1.0) / (n_pts + 1.0);
      p[i] = t.lo + frac * t.length();
    }
    if (!in_unsafe(p)) found = true;
    int d = 0;
    while (d < n && ++idx[static_cast<size_t>(d)] == n_pts) {
      idx[static_cast<size_t>(d)] = 0;
      ++d;
    }
    if (d == n) break;
  }
  if (!found) {
    throw ParameterError("target interior is fully covered by obstacles; no attractor exists");
  }
}

bool Environment::in_unsafe(const Vec& x, int* which) const {
  for (size_t j = 0; j < obstacles.size(); ++j) {
    if (contains(obstacles[j], x)) {
      if (which) *which = static_cast<int>(j);
      return true;
    }
  }
  return false;
}

std::optional<std::pair<double, double>> intersection_window(
    const Eigen::Ref<const Eigen::VectorXd>& times,
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle) {
  if (times.size() != states.rows()) throw DimensionError("times/states row mismatch");
  if (times.size() < 2) throw ParameterError("trajectory needs at least 2 samples");
  scan::IndexWindow w = scan::membership_window_auto(states, obstacle);
  if (w.empty()) return std::nullopt;
  return std::make_pair(times[w.first], times[w.last]);
}

}  // namespace fras
