#include <doctest.h>

#include <random>

#include "fras/scan.hpp"

using namespace fras;

namespace {

SampleMatrix random_states(std::ptrdiff_t n, int dims, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  SampleMatrix states(n, dims);
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    for (int i = 0; i < dims; ++i) states(r, i) = u(gen);
  }
  return states;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree exactly") {
  // sizes straddling the dispatch threshold
  for (const std::ptrdiff_t n : {37L, 4096L, 50001L}) {
    const SampleMatrix states = random_states(n, 3, 1234 + static_cast<std::uint64_t>(n));
    const auto ball = ObstacleShape::ball(Eigen::Vector3d(0.0, 0.0, 0.0), 3.0);
    const auto rect = ObstacleShape::rect(
        HyperRectangle::from_bounds(Eigen::Vector2d(-2.0, -2.0), Eigen::Vector2d(2.0, 2.0)));

    for (const auto& shape : {ball, rect}) {
      CHECK(scan::membership_window_serial(states, shape) ==
            scan::membership_window_parallel(states, shape));
      CHECK(scan::projection_entries_serial(states, shape) ==
            scan::projection_entries_parallel(states, shape));
    }

    SampleMatrix lo = states.array() - 0.3;
    SampleMatrix hi = states.array() + 0.3;
    // plant violations at scattered rows
    for (std::ptrdiff_t r = 5; r < n; r += 17) lo(r, r % 3) = states(r, r % 3) + 1.0;
    CHECK(scan::containment_violations_serial(states, lo, hi) ==
          scan::containment_violations_parallel(states, lo, hi));
  }
}

TEST_CASE("window kernel finds first and last hits") {
  SampleMatrix states = SampleMatrix::Zero(100, 2);
  for (std::ptrdiff_t r = 0; r < 100; ++r) states(r, 0) = 100.0;  // far away
  for (std::ptrdiff_t r = 40; r <= 60; ++r) states(r, 0) = 0.0;   // inside
  const auto ball = ObstacleShape::ball(Eigen::Vector2d(0.0, 0.0), 1.0);
  const auto w = scan::membership_window_serial(states, ball);
  CHECK(w.first == 40);
  CHECK(w.last == 60);

  const auto none = scan::membership_window_serial(
      states, ObstacleShape::ball(Eigen::Vector2d(50.0, 50.0), 1.0));
  CHECK(none.empty());
}

TEST_CASE("projection entries are per-dimension firsts") {
  SampleMatrix states(10, 2);
  for (std::ptrdiff_t r = 0; r < 10; ++r) {
    states(r, 0) = static_cast<double>(r);        // enters [4,6] at r=4
    states(r, 1) = static_cast<double>(r) - 5.0;  // enters [1,2] at r=6
  }
  const auto rect = ObstacleShape::rect(
      HyperRectangle::from_bounds(Eigen::Vector2d(4.0, 1.0), Eigen::Vector2d(6.0, 2.0)));
  const auto entries = scan::projection_entries_serial(states, rect);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0] == 4);
  CHECK(entries[1] == 6);
}

TEST_CASE("containment scan reports the first strict violation per dimension") {
  SampleMatrix states = SampleMatrix::Zero(20, 2);
  SampleMatrix lo = SampleMatrix::Constant(20, 2, -1.0);
  SampleMatrix hi = SampleMatrix::Constant(20, 2, 1.0);
  states(7, 1) = 1.0;   // on the bound: strict containment fails
  states(3, 0) = -2.0;  // below
  const auto v = scan::containment_violations_serial(states, lo, hi);
  CHECK(v[0] == 3);
  CHECK(v[1] == 7);
}
