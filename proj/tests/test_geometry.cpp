#include "doctest.h"
#include "iknap/geometry.hpp"
#include "iknap/rng.hpp"

using namespace iknap;

namespace {

// Sampling oracle: segments intersect if some pair of sampled points nearly
// coincides. Only trustworthy as a positive check.
bool sampled_intersection(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2, int steps = 2000) {
  for (int i = 0; i <= steps; ++i) {
    const Vec2 a = p1 + (p2 - p1) * (static_cast<double>(i) / steps);
    double best = 1e300;
    for (int j = 0; j <= steps; ++j) {
      const Vec2 b = q1 + (q2 - q1) * (static_cast<double>(j) / steps);
      best = std::min(best, distance(a, b));
    }
    if (best < 1e-9) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("segment_intersects: perpendicular crossing") {
  CHECK(segment_intersects({0, 0}, {1, 0}, {0.5, -1}, {0.5, 1}));
}

TEST_CASE("segment_intersects: parallel disjoint") {
  CHECK_FALSE(segment_intersects({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST_CASE("segment_intersects: shared endpoint, collinear continuation") {
  CHECK(segment_intersects({0, 0}, {1, 0}, {1, 0}, {2, 0}));
  CHECK(sampled_intersection({0, 0}, {1, 0}, {1, 0}, {2, 0}, 400));
}

TEST_CASE("segment_intersects: collinear overlap and gap") {
  CHECK(segment_intersects({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  CHECK_FALSE(segment_intersects({0, 0}, {1, 0}, {1.5, 0}, {3, 0}));
  CHECK(segment_intersects({0, 0}, {2, 0}, {0.5, 0}, {1.5, 0}));  // containment
}

TEST_CASE("segment_intersects: T junction") {
  CHECK(segment_intersects({0, 0}, {2, 0}, {1, 0}, {1, 5}));
}

TEST_CASE("segment_intersects is symmetric under argument and endpoint swaps") {
  Rng rng(1234, "geom");
  for (int it = 0; it < 2000; ++it) {
    const Vec2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)}, b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Vec2 c{rng.uniform(-5, 5), rng.uniform(-5, 5)}, d{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const bool base = segment_intersects(a, b, c, d);
    CHECK(base == segment_intersects(c, d, a, b));
    CHECK(base == segment_intersects(b, a, c, d));
    CHECK(base == segment_intersects(a, b, d, c));
    CHECK(base == segment_intersects(b, a, d, c));
  }
}

TEST_CASE("segment_blocks_sight ignores endpoint-only contact") {
  // Wall through the sight's start point only.
  CHECK_FALSE(segment_blocks_sight({0, 0}, {2, 0}, Wall{{0, -1}, {0, 1}}));
  // Wall endpoint equal to the sight's far endpoint.
  CHECK_FALSE(segment_blocks_sight({0, 0}, {2, 0}, Wall{{2, 0}, {3, 4}}));
  // Proper crossing still blocks.
  CHECK(segment_blocks_sight({0, 0}, {2, 0}, Wall{{1, -1}, {1, 1}}));
  // Wall endpoint strictly inside the sight blocks.
  CHECK(segment_blocks_sight({0, 0}, {2, 0}, Wall{{1, 0}, {1, 5}}));
  // Collinear overlap blocks; collinear single-point contact at the sight end does not.
  CHECK(segment_blocks_sight({0, 0}, {2, 0}, Wall{{1, 0}, {3, 0}}));
  CHECK_FALSE(segment_blocks_sight({0, 0}, {2, 0}, Wall{{2, 0}, {3, 0}}));
}

TEST_CASE("point and segment distances") {
  CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(point_segment_distance({3, 0}, {-1, 0}, {1, 0}) == doctest::Approx(2.0));
  CHECK(segment_segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}) == doctest::Approx(1.0));
  CHECK(segment_segment_distance({0, 0}, {1, 0}, {0.5, -1}, {0.5, 1}) == doctest::Approx(0.0));
}
