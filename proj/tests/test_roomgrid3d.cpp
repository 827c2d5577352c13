#include <catch2/catch_amalgamated.hpp>

#include "graphnav/roomgrid3d.hpp"

using namespace graphnav;

namespace {

// Counts connected free openings in the ceiling slab between floor f and
// f+1 by scanning the slab mid-plane at fine resolution and clustering free
// samples with a 2D flood fill. Independent of the generator's bookkeeping.
int count_slab_openings(const WorkspaceMap& map, int floor, double room_size,
                        double resolution = 0.01) {
  const double z = (floor + 1) * room_size;  // slab mid-plane
  const int n = static_cast<int>(std::round((map.bounds.hi.x - map.bounds.lo.x) / resolution));
  std::vector<std::uint8_t> free_cell(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec3 p(map.bounds.lo.x + (i + 0.5) * resolution,
                   map.bounds.lo.y + (j + 0.5) * resolution, z);
      if (!is_obstacle(map, p)) free_cell[static_cast<std::size_t>(j) * n + i] = 1;
    }
  int clusters = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < free_cell.size(); ++s) {
    if (free_cell[s] != 1) continue;
    ++clusters;
    stack.push_back(s);
    free_cell[s] = 2;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const int ci = static_cast<int>(cur % n);
      const int cj = static_cast<int>(cur / n);
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int ni = ci + di[k];
        const int nj = cj + dj[k];
        if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
        const std::size_t f = static_cast<std::size_t>(nj) * n + ni;
        if (free_cell[f] == 1) {
          free_cell[f] = 2;
          stack.push_back(f);
        }
      }
    }
  }
  return clusters;
}

}  // namespace

TEST_CASE("paper-sized room grid: cube, floors, rooms, shafts") {
  const WorkspaceMap map = generate_room_grid_3d(4, 4, 0.25, 1);
  CHECK(map.dimension == 3);
  // 1 m cube
  CHECK(map.bounds.hi.x - map.bounds.lo.x == Catch::Approx(1.0));
  CHECK(map.bounds.hi.y - map.bounds.lo.y == Catch::Approx(1.0));
  CHECK(map.bounds.hi.z - map.bounds.lo.z == Catch::Approx(1.0));
  // 16 rooms per lower floor, all of them start regions (3 lower floors)
  CHECK(map.start_regions.size() == 3u * 16u);
  // one goal room on the top floor
  CHECK(map.goal_region.lo.z >= 3 * 0.25 - 0.02);
  // per-floor door count: 2 * r * (r-1) openings between adjacent rooms
  int doors_per_floor[4] = {0, 0, 0, 0};
  for (const Door& d : map.doors) {
    REQUIRE(d.region >= 0);
    REQUIRE(d.region < 4);
    ++doors_per_floor[d.region];
  }
  for (int f = 0; f < 4; ++f) CHECK(doors_per_floor[f] == 2 * 4 * 3);
  // exactly floors-1 = 3 inter-floor openings, one per slab
  for (int f = 0; f < 3; ++f) CHECK(count_slab_openings(map, f, 0.25) == 1);
}

TEST_CASE("minimal room grid has exactly one inter-floor opening") {
  const WorkspaceMap map = generate_room_grid_3d(2, 2, 0.25, 0);
  CHECK(count_slab_openings(map, 0, 0.25) == 1);
  CHECK(map.start_regions.size() == 4);
}

TEST_CASE("flood fill reaches the goal from every start region") {
  const WorkspaceMap map = generate_room_grid_3d(4, 4, 0.25, 1);
  for (std::size_t i = 0; i < map.start_regions.size(); ++i) {
    INFO("start region " << i);
    CHECK(flood_fill_connected(map, {map.start_regions[i]}, map.goal_region, 0.01));
  }
}

TEST_CASE("room grid generation is deterministic per seed") {
  const std::string a = serialize_map(generate_room_grid_3d(2, 3, 0.25, 4));
  const std::string b = serialize_map(generate_room_grid_3d(2, 3, 0.25, 4));
  const std::string c = serialize_map(generate_room_grid_3d(2, 3, 0.25, 5));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("invalid room grid parameters are rejected") {
  CHECK_THROWS_AS(generate_room_grid_3d(1, 4, 0.25, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_room_grid_3d(4, 1, 0.25, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_room_grid_3d(4, 4, 0.0, 0), std::invalid_argument);
  // door wider than the room
  CHECK_THROWS_AS(generate_room_grid_3d(2, 2, 0.25, 0, 0.02, 0.25),
                  std::invalid_argument);
}

TEST_CASE("3D map serialization round-trips losslessly") {
  const WorkspaceMap map = generate_room_grid_3d(2, 3, 0.25, 8);
  const std::string text = serialize_map(map);
  const WorkspaceMap back = parse_map(text);
  CHECK(serialize_map(back) == text);
  CHECK(back.dimension == 3);
}

TEST_CASE("goal and start interiors are obstacle-free") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const WorkspaceMap map = generate_room_grid_3d(2, 3, 0.25, seed);
    INFO("seed " << seed);
    CHECK_FALSE(is_obstacle(map, map.goal_region.center()));
    for (const Box& s : map.start_regions) CHECK_FALSE(is_obstacle(map, s.center()));
  }
}
