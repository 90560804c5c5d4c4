#include "fras/circumvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fras/scan.hpp"

namespace fras {

const char* side_name(Side s) { return s == Side::Lower ? "lower" : "upper"; }

BetaEval CircumventFn::eval(double t) const {
  const double tau = t - mid;
  /* Guard band: the analytic limit of the bump at the window edge is 0;
   * this enforces it before the exponent's denominator degenerates. */
  const double guard = 1e-9 * half_width;
  if (std::abs(tau) >= half_width - guard) return {base, 0.0};
  const double r2 = half_width * half_width;
  const double w = r2 - tau * tau;
  const double bump = std::exp(-smoothness * tau * tau / w);
  const double bump_dot = bump * (-2.0 * smoothness * tau * r2 / (w * w));
  const double sgn = (side == Side::Lower) ? 1.0 : -1.0;
  return {base + sgn * amplitude * bump, sgn * amplitude * bump_dot};
}

int SelectionRng::uniform_below(int k) {
  if (k < 1) throw ParameterError("uniform_below needs k >= 1");
  ++draws_;
  const std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % static_cast<std::uint64_t>(k);
  std::uint64_t v = gen_();
  while (v >= bound) v = gen_();
  return static_cast<int>(v % static_cast<std::uint64_t>(k));
}

std::optional<ObstacleHit> first_obstacle(const Eigen::Ref<const Eigen::VectorXd>& times,
                                          const Eigen::Ref<const SampleMatrix>& states,
                                          std::span<const ObstacleShape> obstacles) {
  std::optional<ObstacleHit> best;
  std::ptrdiff_t best_entry = std::numeric_limits<std::ptrdiff_t>::max();
  for (size_t j = 0; j < obstacles.size(); ++j) {
    const scan::IndexWindow w = scan::membership_window_auto(states, obstacles[j]);
    if (w.empty()) continue;
    if (w.first < best_entry) {
      best_entry = w.first;
      best = ObstacleHit{static_cast<int>(j), times[w.first], times[w.last]};
    }
  }
  return best;
}

int select_dimension(const Eigen::Ref<const Eigen::VectorXd>& times,
                     const Eigen::Ref<const SampleMatrix>& states,
                     const ObstacleShape& obstacle, double step, SelectionRng& rng) {
  const std::vector<std::ptrdiff_t> entries = scan::projection_entries_auto(states, obstacle);
  double t_min = std::numeric_limits<double>::infinity();
  for (std::ptrdiff_t e : entries) {
    if (e >= 0) t_min = std::min(t_min, times[e]);
  }
  if (!std::isfinite(t_min)) {
    throw ParameterError("select_dimension: trajectory never enters any projection");
  }
  std::vector<int> candidates;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] >= 0 && times[entries[i]] <= t_min + step * (1.0 + 1e-9)) {
      candidates.push_back(static_cast<int>(i));
    }
  }
  if (candidates.size() == 1) return candidates.front();
  return candidates[static_cast<size_t>(rng.uniform_below(static_cast<int>(candidates.size())))];
}

std::optional<Side> forced_side(const Interval& obstacle_proj, const Interval& space_proj) {
  const bool touches_lo = obstacle_proj.lo <= space_proj.lo;
  const bool touches_hi = obstacle_proj.hi >= space_proj.hi;
  if (touches_lo && touches_hi) {
    std::ostringstream os;
    os << "obstacle spans the whole state-space projection [" << space_proj.lo << ", "
       << space_proj.hi << "]; no side is left to circumvent through";
    throw GeometricInfeasibilityError(os.str());
  }
  if (touches_lo) return Side::Lower;
  if (touches_hi) return Side::Upper;
  return std::nullopt;
}

Side select_side(const Interval& obstacle_proj, const Interval& space_proj, SelectionRng& rng) {
  if (auto s = forced_side(obstacle_proj, space_proj)) return *s;
  return rng.uniform_below(2) == 0 ? Side::Lower : Side::Upper;
}

CircumventFn make_circumvent(const Environment& env, const ObstacleShape& obstacle,
                             int obstacle_index, int dim_i, Side side,
                             std::pair<double, double> window, double delta_t, double delta_B,
                             double k_bump) {
  if (!(delta_t > 0.0)) throw ParameterError("delta_t must be positive");
  if (!(k_bump > 0.0)) throw ParameterError("bump smoothness k must be positive");
  if (!(delta_B >= 0.0)) throw ParameterError("delta_B must be non-negative");
  if (dim_i < 0 || dim_i >= obstacle.dim()) {
    throw DimensionError("circumvent dimension outside the obstacle's dimensions");
  }
  if (!(window.first <= window.second)) throw ParameterError("window times out of order");

  const Interval proj = project(obstacle, dim_i);
  const Interval space = project(env.state_space, dim_i);

  CircumventFn cf;
  cf.dim = dim_i;
  cf.side = side;
  cf.smoothness = k_bump;
  cf.obstacle = obstacle_index;
  cf.window_lo = window.first;
  cf.window_hi = window.second;
  cf.mid = 0.5 * (window.first + window.second);
  cf.half_width = 0.5 * (window.second - window.first) + delta_t;

  if (side == Side::Lower) {
    cf.base = space.lo;
    cf.amplitude = proj.hi - space.lo + delta_B;
    const double peak = cf.base + cf.amplitude;
    if (peak >= space.hi) {
      std::ostringstream os;
      os << "lower-side bump on dimension " << dim_i << " peaks at " << peak
         << ", outside the state-space bound " << space.hi;
      throw GeometricInfeasibilityError(os.str());
    }
  } else {
    cf.base = space.hi;
    cf.amplitude = space.hi - proj.lo + delta_B;
    const double trough = cf.base - cf.amplitude;
    if (trough <= space.lo) {
      std::ostringstream os;
      os << "upper-side bump on dimension " << dim_i << " dips to " << trough
         << ", outside the state-space bound " << space.lo;
      throw GeometricInfeasibilityError(os.str());
    }
  }
  if (!(cf.amplitude > 0.0)) {
    throw GeometricInfeasibilityError("circumvent amplitude must be positive");
  }
  return cf;
}

}  // namespace fras
