#include <catch2/catch_amalgamated.hpp>

#include "graphnav/dynamics.hpp"
#include "graphnav/maze2d.hpp"

using namespace graphnav;

namespace {

WorkspaceMap open_map() {
  WorkspaceMap map;
  map.dimension = 2;
  map.bounds = Box({-10, -10, 0}, {10, 10, 0});
  map.goal_region = Box({9, 9, 0}, {10, 10, 0});
  map.start_regions.push_back(Box({-10, -10, 0}, {-9, -9, 0}));
  return map;
}

DynamicsSpec holonomic_spec(double dt = 0.1, double noise = 0.0) {
  DynamicsSpec spec;
  spec.model = DynamicsModel::kHolonomicVelocity;
  spec.action_lo = {-1.0, -1.0};
  spec.action_hi = {1.0, 1.0};
  spec.dt = dt;
  spec.noise_scale = noise;
  return spec;
}

}  // namespace

TEST_CASE("DynamicsSpec validation") {
  DynamicsSpec spec = holonomic_spec();
  CHECK_NOTHROW(spec.validate());
  spec.dt = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = holonomic_spec();
  spec.noise_scale = -0.1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = holonomic_spec();
  spec.action_hi = {1.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = holonomic_spec();
  spec.action_lo[0] = spec.action_hi[0];
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("zero action and zero noise leave the state unchanged") {
  const WorkspaceMap map = open_map();
  Rng rng(1);
  const AgentState s{{0.5, -0.25, 0.0}, 0.0};
  const StepResult r = step_dynamics(holonomic_spec(), s, {0.0, 0.0}, rng, map);
  CHECK_FALSE(r.collided);
  CHECK(r.state.position == s.position);
}

TEST_CASE("holonomic Euler step") {
  const WorkspaceMap map = open_map();
  Rng rng(1);
  const StepResult r =
      step_dynamics(holonomic_spec(0.1), {{0, 0, 0}, 0.0}, {1.0, 0.0}, rng, map);
  CHECK_FALSE(r.collided);
  CHECK(r.state.position.x == Catch::Approx(0.1));
  CHECK(r.state.position.y == Catch::Approx(0.0));
}

TEST_CASE("actions are clamped to the configured bounds") {
  const WorkspaceMap map = open_map();
  Rng rng(1);
  const StepResult r =
      step_dynamics(holonomic_spec(0.1), {{0, 0, 0}, 0.0}, {5.0, -7.0}, rng, map);
  CHECK(r.state.position.x == Catch::Approx(0.1));    // clamped to 1.0
  CHECK(r.state.position.y == Catch::Approx(-0.1));  // clamped to -1.0
}

TEST_CASE("unicycle closed-form integration") {
  const WorkspaceMap map = open_map();
  DynamicsSpec spec;
  spec.model = DynamicsModel::kUnicycle;
  spec.action_lo = {0.0, -2.0};
  spec.action_hi = {1.0, 2.0};
  spec.dt = 0.1;
  Rng rng(1);
  SECTION("straight motion") {
    const StepResult r = step_dynamics(spec, {{0, 0, 0}, 0.0}, {1.0, 0.0}, rng, map);
    CHECK(r.state.position.x == Catch::Approx(0.1));
    CHECK(r.state.position.y == Catch::Approx(0.0));
    CHECK(r.state.heading == Catch::Approx(0.0));
  }
  SECTION("turning updates heading before translating") {
    const StepResult r = step_dynamics(spec, {{0, 0, 0}, 0.0}, {1.0, 2.0}, rng, map);
    const double h = 2.0 * 0.1;
    CHECK(r.state.heading == Catch::Approx(h));
    CHECK(r.state.position.x == Catch::Approx(0.1 * std::cos(h)));
    CHECK(r.state.position.y == Catch::Approx(0.1 * std::sin(h)));
  }
}

TEST_CASE("collision leaves the agent at its pre-collision state") {
  WorkspaceMap map = open_map();
  map.obstacles.push_back(Box({1, -1, 0}, {1.1, 1, 0}));
  Rng rng(1);
  const AgentState s{{0.95, 0.0, 0.0}, 0.0};
  const StepResult r = step_dynamics(holonomic_spec(0.1), s, {1.0, 0.0}, rng, map);
  CHECK(r.collided);
  CHECK(r.state.position == s.position);
}

TEST_CASE("noiseless stepping is reproducible and matches the collision oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const WorkspaceMap map = generate_maze_2d(4, 4, 0.2, 0.02, 0.14, seed);
    const BoxIndex index(map);
    const DynamicsSpec spec = holonomic_spec(0.05);
    Rng walk(seed);
    AgentState s{map.start_regions.front().center(), 0.0};
    for (int step = 0; step < 200; ++step) {
      const std::vector<double> a = {walk.uniform(-1, 1), walk.uniform(-1, 1)};
      Rng r1(step), r2(step);
      const StepResult with_index = step_dynamics(spec, s, a, r1, map, &index);
      const StepResult without = step_dynamics(spec, s, a, r2, map, nullptr);
      // broad-phase and exhaustive collision checks agree
      CHECK(with_index.collided == without.collided);
      CHECK(with_index.state.position == without.state.position);
      // collision flag agrees with the segment oracle on the motion segment
      Vec3 target = s.position;
      target.x += std::clamp(a[0], -1.0, 1.0) * spec.dt;
      target.y += std::clamp(a[1], -1.0, 1.0) * spec.dt;
      CHECK(without.collided == !segment_collision_free(map, s.position, target));
      if (!without.collided) s = without.state;
    }
  }
}

TEST_CASE("noisy steps are deterministic for a fixed rng seed") {
  const WorkspaceMap map = open_map();
  const DynamicsSpec spec = holonomic_spec(0.1, 0.05);
  Rng r1(99), r2(99);
  const StepResult a = step_dynamics(spec, {{0, 0, 0}, 0.0}, {0.5, 0.5}, r1, map);
  const StepResult b = step_dynamics(spec, {{0, 0, 0}, 0.0}, {0.5, 0.5}, r2, map);
  CHECK(a.state.position == b.state.position);
  // noise actually perturbs the deterministic Euler target
  CHECK(a.state.position.x != Catch::Approx(0.05).margin(1e-12));
}
