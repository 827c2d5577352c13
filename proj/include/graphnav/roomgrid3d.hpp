#ifndef GRAPHNAV_ROOMGRID3D_HPP_
#define GRAPHNAV_ROOMGRID3D_HPP_

#include <stdexcept>
#include <vector>

#include "graphnav/workspace.hpp"

namespace graphnav {

// Stacked room-grid workspace: `floors` horizontal floors, each a
// rooms_per_side x rooms_per_side grid of rooms connected by door openings,
// with exactly one ceiling opening (the shaft room, seeded-random) linking
// consecutive floors. Goal room on the top floor; every room on the lower
// floors is a start region.
inline WorkspaceMap generate_room_grid_3d(int floors, int rooms_per_side,
                                          double room_size, std::uint64_t seed,
                                          double wall_thickness = 0.02,
                                          double door_width = 0.14) {
  if (floors < 2) throw std::invalid_argument("generate_room_grid_3d: need >= 2 floors");
  if (rooms_per_side < 2)
    throw std::invalid_argument("generate_room_grid_3d: need >= 2 rooms per side");
  if (room_size <= 0.0)
    throw std::invalid_argument("generate_room_grid_3d: room size must be positive");
  if (door_width >= room_size - wall_thickness)
    throw std::invalid_argument("generate_room_grid_3d: door wider than room");

  const int r = rooms_per_side;
  const double s = room_size;
  const double t = wall_thickness;
  const double d = door_width;

  WorkspaceMap map;
  map.dimension = 3;
  map.bounds = Box({0.0, 0.0, 0.0}, {r * s, r * s, floors * s});
  map.corridor_width = d;
  map.wall_thickness = t;

  Rng rng(derive_seed(seed, 3));

  // Interior walls with centered door gaps; walls span the full floor height.
  for (int f = 0; f < floors; ++f) {
    const double z0 = f * s;
    const double z1 = (f + 1) * s;
    auto add_wall_with_door = [&](bool along_y, int wall_index, int lane) {
      // Wall plane at coordinate wall_index*s, covering lane's room span.
      const double plane = wall_index * s;
      const double a0 = lane * s;
      const double a1 = (lane + 1) * s;
      const double gap0 = (a0 + a1 - d) * 0.5;
      const double gap1 = (a0 + a1 + d) * 0.5;
      const double p0 = plane - t * 0.5;
      const double p1 = plane + t * 0.5;
      if (along_y) {  // wall normal along x; extends in y
        map.obstacles.push_back(Box({p0, a0, z0}, {p1, gap0, z1}));
        map.obstacles.push_back(Box({p0, gap1, z0}, {p1, a1, z1}));
        map.doors.push_back({Box({p0, gap0, z0}, {p1, gap1, z1}), f});
      } else {  // wall normal along y; extends in x
        map.obstacles.push_back(Box({a0, p0, z0}, {gap0, p1, z1}));
        map.obstacles.push_back(Box({gap1, p0, z0}, {a1, p1, z1}));
        map.doors.push_back({Box({gap0, p0, z0}, {gap1, p1, z1}), f});
      }
    };
    for (int i = 1; i < r; ++i)
      for (int lane = 0; lane < r; ++lane) add_wall_with_door(true, i, lane);
    for (int j = 1; j < r; ++j)
      for (int lane = 0; lane < r; ++lane) add_wall_with_door(false, j, lane);
  }

  // Ceiling slabs with one shaft opening per floor boundary.
  for (int f = 0; f < floors - 1; ++f) {
    const double plane = (f + 1) * s;
    const double z0 = plane - t * 0.5;
    const double z1 = plane + t * 0.5;
    const int shaft_i = rng.uniform_int(0, r - 1);
    const int shaft_j = rng.uniform_int(0, r - 1);
    const double cx = (shaft_i + 0.5) * s;
    const double cy = (shaft_j + 0.5) * s;
    const double g0x = cx - d * 0.5, g1x = cx + d * 0.5;
    const double g0y = cy - d * 0.5, g1y = cy + d * 0.5;
    const double ex = r * s;
    // Frame decomposition of the slab around the square opening.
    map.obstacles.push_back(Box({0.0, 0.0, z0}, {g0x, ex, z1}));
    map.obstacles.push_back(Box({g1x, 0.0, z0}, {ex, ex, z1}));
    map.obstacles.push_back(Box({g0x, 0.0, z0}, {g1x, g0y, z1}));
    map.obstacles.push_back(Box({g0x, g1y, z0}, {g1x, ex, z1}));
  }

  auto room_interior = [&](int i, int j, int f) {
    return Box({i * s + t * 0.5, j * s + t * 0.5, f * s + t * 0.5},
               {(i + 1) * s - t * 0.5, (j + 1) * s - t * 0.5,
                (f + 1) * s - t * 0.5});
  };

  // Goal: seeded-random room on the top floor.
  const int gi = rng.uniform_int(0, r - 1);
  const int gj = rng.uniform_int(0, r - 1);
  map.goal_region = room_interior(gi, gj, floors - 1);

  // Starts: every room on the lower floors (all but the top).
  for (int f = 0; f < floors - 1; ++f)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        map.start_regions.push_back(room_interior(i, j, f));

  return map;
}

}  // namespace graphnav

#endif  // GRAPHNAV_ROOMGRID3D_HPP_
