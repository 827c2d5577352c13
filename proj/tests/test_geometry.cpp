#include <catch2/catch_amalgamated.hpp>

#include "graphnav/geometry.hpp"

using namespace graphnav;

TEST_CASE("Vec3 arithmetic and distance") {
  const Vec3 a(1.0, 2.0, 3.0);
  const Vec3 b(4.0, 6.0, 3.0);
  CHECK((a + b) == Vec3(5.0, 8.0, 6.0));
  CHECK((b - a) == Vec3(3.0, 4.0, 0.0));
  CHECK((a * 2.0) == Vec3(2.0, 4.0, 6.0));
  CHECK(distance(a, b) == Catch::Approx(5.0));
  CHECK(norm(Vec3(0, 0, 0)) == 0.0);
  CHECK(dot(Vec3(1, 0, 0), Vec3(0, 1, 0)) == 0.0);
}

TEST_CASE("Box containment is closed") {
  const Box b({0, 0, 0}, {1, 1, 0});
  CHECK(b.contains({0.5, 0.5, 0.0}));
  CHECK(b.contains({0.0, 0.0, 0.0}));  // boundary counts
  CHECK(b.contains({1.0, 1.0, 0.0}));
  CHECK_FALSE(b.contains({1.0 + 1e-12, 0.5, 0.0}));
  CHECK_FALSE(b.contains({0.5, 0.5, 0.1}));
}

TEST_CASE("Box overlap predicates") {
  const Box a({0, 0, 0}, {1, 1, 0});
  const Box touching({1, 0, 0}, {2, 1, 0});
  const Box inside({0.25, 0.25, 0}, {0.75, 0.75, 0});
  const Box disjoint({2, 2, 0}, {3, 3, 0});
  CHECK(a.overlaps_closed(touching));
  CHECK_FALSE(a.overlaps_open(touching));  // shared face only
  CHECK(a.overlaps_open(inside));
  CHECK_FALSE(a.overlaps_closed(disjoint));
}

TEST_CASE("Box distance_to and inflated") {
  const Box b({0, 0, 0}, {1, 1, 1});
  CHECK(b.distance_to({0.5, 0.5, 0.5}) == 0.0);
  CHECK(b.distance_to({2.0, 0.5, 0.5}) == Catch::Approx(1.0));
  CHECK(b.distance_to({2.0, 2.0, 0.5}) == Catch::Approx(std::sqrt(2.0)));
  const Box big = b.inflated(0.5);
  CHECK(big.lo.x == Catch::Approx(-0.5));
  CHECK(big.hi.z == Catch::Approx(1.5));
}

TEST_CASE("segment_intersects_box basic cases") {
  const Box wall({1, 0, 0}, {1.1, 2, 0});
  // crosses the wall
  CHECK(segment_intersects_box({0, 1, 0}, {2, 1, 0}, wall));
  // stops short
  CHECK_FALSE(segment_intersects_box({0, 1, 0}, {0.9, 1, 0}, wall));
  // parallel miss
  CHECK_FALSE(segment_intersects_box({0, 3, 0}, {2, 3, 0}, wall));
  // degenerate segment inside / outside
  CHECK(segment_intersects_box({1.05, 1, 0}, {1.05, 1, 0}, wall));
  CHECK_FALSE(segment_intersects_box({0.5, 1, 0}, {0.5, 1, 0}, wall));
  // touching a corner (closed bounds)
  CHECK(segment_intersects_box({1, 0, 0}, {1, 0, 0}, wall));
}

TEST_CASE("segment_intersects_box agrees with dense sampling oracle") {
  // Randomized differential check: parametric clipping vs point sampling.
  // Sampling can only miss razor-thin grazes, so assert one direction
  // exactly (sampled hit => exact hit) and the other statistically by
  // avoiding degenerate boxes.
  Rng rng(1234);
  for (int it = 0; it < 500; ++it) {
    Vec3 lo(rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0);
    Box b(lo, lo + Vec3(rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0), 0.0));
    Vec3 p(rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0);
    Vec3 q(rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0);
    bool sampled_hit = false;
    for (int k = 0; k <= 400; ++k) {
      const double t = k / 400.0;
      if (b.contains(p + (q - p) * t)) {
        sampled_hit = true;
        break;
      }
    }
    const bool exact = segment_intersects_box(p, q, b);
    if (sampled_hit) CHECK(exact);
    if (!exact) CHECK_FALSE(sampled_hit);
  }
}

TEST_CASE("segment_box_entry returns first entry parameter") {
  const Box b({1, -1, 0}, {2, 1, 0});
  CHECK(segment_box_entry({0, 0, 0}, {4, 0, 0}, b) == Catch::Approx(0.25));
  CHECK(segment_box_entry({1.5, 0, 0}, {4, 0, 0}, b) == 0.0);  // starts inside
  CHECK(segment_box_entry({0, 2, 0}, {4, 2, 0}, b) == kInf);
}

TEST_CASE("Rng determinism and ranges") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform(0, 1);
    CHECK(va == b.uniform(0, 1));
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  // different seed diverges somewhere
  Rng a2(42);
  bool differs = false;
  for (int i = 0; i < 100; ++i)
    if (a2.uniform(0, 1) != c.uniform(0, 1)) differs = true;
  CHECK(differs);
  // inclusive integer bounds
  Rng d(7);
  int lo_seen = 10, hi_seen = -1;
  for (int i = 0; i < 1000; ++i) {
    const int v = d.uniform_int(0, 3);
    lo_seen = std::min(lo_seen, v);
    hi_seen = std::max(hi_seen, v);
  }
  CHECK(lo_seen == 0);
  CHECK(hi_seen == 3);
  // zero-stddev gaussian is exactly 0 and consumes no entropy
  Rng e(5), f(5);
  CHECK(e.gaussian(0.0) == 0.0);
  CHECK(e.uniform(0, 1) == f.uniform(0, 1));
}

TEST_CASE("derive_seed separates salts and is stable") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
