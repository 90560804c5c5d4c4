#include "fras/scan.hpp"

#include <limits>

namespace fras::scan {

namespace {

inline bool sample_inside(const Eigen::Ref<const SampleMatrix>& states, std::ptrdiff_t row,
                          const ObstacleShape& obstacle) {
  if (obstacle.is_rect()) {
    const auto& r = obstacle.as_rect();
    for (int i = 0; i < r.dim(); ++i) {
      const double v = states(row, i);
      const auto& iv = r.dims[static_cast<size_t>(i)];
      if (v < iv.lo || v > iv.hi) return false;
    }
    return true;
  }
  const auto& b = obstacle.as_ball();
  double d2 = 0.0;
  for (int i = 0; i < b.dim(); ++i) {
    const double d = states(row, i) - b.center[i];
    d2 += d * d;
  }
  return d2 <= b.radius * b.radius;
}

void check_dims(const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle) {
  if (states.cols() < obstacle.dim()) {
    throw DimensionError("trajectory has fewer coordinates than the obstacle");
  }
}

}  // namespace

IndexWindow membership_window_serial(const Eigen::Ref<const SampleMatrix>& states,
                                     const ObstacleShape& obstacle) {
  check_dims(states, obstacle);
  IndexWindow w;
  for (std::ptrdiff_t r = 0; r < states.rows(); ++r) {
    if (sample_inside(states, r, obstacle)) {
      if (w.first < 0) w.first = r;
      w.last = r;
    }
  }
  return w;
}

IndexWindow membership_window_parallel(const Eigen::Ref<const SampleMatrix>& states,
                                       const ObstacleShape& obstacle) {
  check_dims(states, obstacle);
  const std::ptrdiff_t n = states.rows();
  std::ptrdiff_t first = n;
  std::ptrdiff_t last = -1;
#pragma omp parallel for reduction(min : first) reduction(max : last) schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    if (sample_inside(states, r, obstacle)) {
      if (r < first) first = r;
      if (r > last) last = r;
    }
  }
  IndexWindow w;
  if (last >= 0) {
    w.first = first;
    w.last = last;
  }
  return w;
}

IndexWindow membership_window_auto(const Eigen::Ref<const SampleMatrix>& states,
                                   const ObstacleShape& obstacle) {
#ifdef _OPENMP
  if (states.rows() >= kParallelThreshold) return membership_window_parallel(states, obstacle);
#endif
  return membership_window_serial(states, obstacle);
}

std::vector<std::ptrdiff_t> projection_entries_serial(
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle) {
  check_dims(states, obstacle);
  const int k = obstacle.dim();
  std::vector<std::ptrdiff_t> entry(static_cast<size_t>(k), -1);
  for (int i = 0; i < k; ++i) {
    const Interval p = project(obstacle, i);
    for (std::ptrdiff_t r = 0; r < states.rows(); ++r) {
      if (p.contains(states(r, i))) {
        entry[static_cast<size_t>(i)] = r;
        break;
      }
    }
  }
  return entry;
}

std::vector<std::ptrdiff_t> projection_entries_parallel(
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle) {
  check_dims(states, obstacle);
  const int k = obstacle.dim();
  const std::ptrdiff_t n = states.rows();
  std::vector<std::ptrdiff_t> entry(static_cast<size_t>(k), -1);
  for (int i = 0; i < k; ++i) {
    const Interval p = project(obstacle, i);
    std::ptrdiff_t first = n;
#pragma omp parallel for reduction(min : first) schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      if (r < first && p.contains(states(r, i))) first = r;
    }
    entry[static_cast<size_t>(i)] = (first == n) ? -1 : first;
  }
  return entry;
}

std::vector<std::ptrdiff_t> projection_entries_auto(
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle) {
#ifdef _OPENMP
  if (states.rows() >= kParallelThreshold) return projection_entries_parallel(states, obstacle);
#endif
  return projection_entries_serial(states, obstacle);
}

std::vector<std::ptrdiff_t> containment_violations_serial(
    const Eigen::Ref<const SampleMatrix>& states,
    const Eigen::Ref<const SampleMatrix>& lo, const Eigen::Ref<const SampleMatrix>& hi) {
  if (lo.rows() != states.rows() || hi.rows() != states.rows() || lo.cols() != states.cols() ||
      hi.cols() != states.cols()) {
    throw DimensionError("bound matrices must match the state matrix");
  }
  const Eigen::Index d = states.cols();
  std::vector<std::ptrdiff_t> viol(static_cast<size_t>(d), -1);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (std::ptrdiff_t r = 0; r < states.rows(); ++r) {
      const double v = states(r, i);
      if (!(lo(r, i) < v && v < hi(r, i))) {
        viol[static_cast<size_t>(i)] = r;
        break;
      }
    }
  }
  return viol;
}

std::vector<std::ptrdiff_t> containment_violations_parallel(
    const Eigen::Ref<const SampleMatrix>& states,
    const Eigen::Ref<const SampleMatrix>& lo, const Eigen::Ref<const SampleMatrix>& hi) {
  if (lo.rows() != states.rows() || hi.rows() != states.rows() || lo.cols() != states.cols() ||
      hi.cols() != states.cols()) {
    throw DimensionError("bound matrices must match the state matrix");
  }
  const Eigen::Index d = states.cols();
  const std::ptrdiff_t n = states.rows();
  std::vector<std::ptrdiff_t> viol(static_cast<size_t>(d), -1);
  for (Eigen::Index i = 0; i < d; ++i) {
    std::ptrdiff_t first = n;
#pragma omp parallel for reduction(min : first) schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      if (r < first) {
        const double v = states(r, i);
        if (!(lo(r, i) < v && v < hi(r, i))) first = r;
      }
    }
    viol[static_cast<size_t>(i)] = (first == n) ? -1 : first;
  }
  return viol;
}

std::vector<std::ptrdiff_t> containment_violations_auto(
    const Eigen::Ref<const SampleMatrix>& states,
    const Eigen::Ref<const SampleMatrix>& lo, const Eigen::Ref<const SampleMatrix>& hi) {
#ifdef _OPENMP
  if (states.rows() >= kParallelThreshold) {
    return containment_violations_parallel(states, lo, hi);
  }
#endif
  return containment_violations_serial(states, lo, hi);
}

}  // namespace fras::scan
