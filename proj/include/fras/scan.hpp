#pragma once

#include <cstdint>
#include <vector>

#include "fras/geometry.hpp"

/* Data-parallel kernels over trajectory samples. Each kernel has a serial
 * reference implementation and an OpenMP one; the *_auto entry points pick
 * the parallel version for large inputs. All reductions are index/min/max
 * based, so serial and parallel results are identical bit for bit. */
namespace fras::scan {

struct IndexWindow {
  std::ptrdiff_t first = -1;  // -1: no sample inside
  std::ptrdiff_t last = -1;

  bool empty() const { return first < 0; }
  bool operator==(const IndexWindow&) const = default;
};

/* Kernel switches to OpenMP above this sample count. */
inline constexpr std::ptrdiff_t kParallelThreshold = 4096;

/* First/last sample index whose state lies inside the obstacle. */
IndexWindow membership_window_serial(const Eigen::Ref<const SampleMatrix>& states,
                                     const ObstacleShape& obstacle);
IndexWindow membership_window_parallel(const Eigen::Ref<const SampleMatrix>& states,
                                       const ObstacleShape& obstacle);
IndexWindow membership_window_auto(const Eigen::Ref<const SampleMatrix>& states,
                                   const ObstacleShape& obstacle);

/* Per-dimension first sample index with x_i inside the obstacle's
 * i-projection (one entry per obstacle dimension; -1 when never). */
std::vector<std::ptrdiff_t> projection_entries_serial(
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle);
std::vector<std::ptrdiff_t> projection_entries_parallel(
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle);
std::vector<std::ptrdiff_t> projection_entries_auto(
    const Eigen::Ref<const SampleMatrix>& states, const ObstacleShape& obstacle);

/* Per-dimension first sample index where lo_ij < x_ij < hi_ij fails
 * (strict containment against precomputed bound rows). */
std::vector<std::ptrdiff_t> containment_violations_serial(
    const Eigen::Ref<const SampleMatrix>& states,
    const Eigen::Ref<const SampleMatrix>& lo, const Eigen::Ref<const SampleMatrix>& hi);
std::vector<std::ptrdiff_t> containment_violations_parallel(
    const Eigen::Ref<const SampleMatrix>& states,
    const Eigen::Ref<const SampleMatrix>& lo, const Eigen::Ref<const SampleMatrix>& hi);
std::vector<std::ptrdiff_t> containment_violations_auto(
    const Eigen::Ref<const SampleMatrix>& states,
    const Eigen::Ref<const SampleMatrix>& lo, const Eigen::Ref<const SampleMatrix>& hi);

}  // namespace fras::scan
