#ifndef GRAPHNAV_MAZE2D_HPP_
#define GRAPHNAV_MAZE2D_HPP_

#include <stdexcept>
#include <vector>

#include "graphnav/workspace.hpp"

namespace graphnav {

namespace maze_detail {

// Wall slots of a cells_x x cells_y maze. Vertical slot (i, j) separates
// cells (i-1, j) and (i, j); horizontal slot (i, j) separates (i, j-1) and
// (i, j). Posts fill the lattice intersections.
struct WallLayout {
  int cx, cy;
  double w, c, p;  // wall thickness, corridor width, pitch

  Box vertical(int i, int j) const {
    return Box({i * p, j * p + w, 0.0}, {i * p + w, j * p + w + c, 0.0});
  }
  Box horizontal(int i, int j) const {
    return Box({i * p + w, j * p, 0.0}, {i * p + w + c, j * p + w, 0.0});
  }
  Box post(int i, int j) const {
    return Box({i * p, j * p, 0.0}, {i * p + w, j * p + w, 0.0});
  }
};

}  // namespace maze_detail

// Perfect maze via randomized spanning-tree carving, then `loop_fraction` of
// the remaining interior walls removed uniformly at random. Start room
// bottom-left, goal room top-right. For mazes of at least 4x4 cells the
// rooms are open 2-cell squares (side 2*pitch, the paper's 0.32 m at the
// default geometry); smaller mazes use a single corridor cell.
inline WorkspaceMap generate_maze_2d(int cells_x, int cells_y,
                                     double loop_fraction,
                                     double wall_thickness,
                                     double corridor_width,
                                     std::uint64_t seed) {
  if (cells_x < 2 || cells_y < 2)
    throw std::invalid_argument("generate_maze_2d: need at least 2x2 cells");
  if (loop_fraction < 0.0 || loop_fraction > 1.0)
    throw std::invalid_argument("generate_maze_2d: loop_fraction outside [0,1]");
  if (corridor_width <= 0.0)
    throw std::invalid_argument("generate_maze_2d: corridor width must be positive");
  if (wall_thickness <= 0.0 || wall_thickness >= corridor_width)
    throw std::invalid_argument("generate_maze_2d: wall thickness must be in (0, corridor)");

  const double w = wall_thickness;
  const double c = corridor_width;
  const double p = w + c;
  maze_detail::WallLayout lay{cells_x, cells_y, w, c, p};
  const double wx = cells_x * p + w;
  const double wy = cells_y * p + w;

  // solid flags for interior slots
  std::vector<std::uint8_t> vsolid(static_cast<std::size_t>(cells_x + 1) * cells_y, 1);
  std::vector<std::uint8_t> hsolid(static_cast<std::size_t>(cells_x) * (cells_y + 1), 1);
  auto vidx = [&](int i, int j) { return static_cast<std::size_t>(j) * (cells_x + 1) + i; };
  auto hidx = [&](int i, int j) { return static_cast<std::size_t>(j) * cells_x + i; };

  // Randomized DFS spanning tree over the cell lattice.
  {
    Rng rng(derive_seed(seed, 1));
    const int n = cells_x * cells_y;
    std::vector<std::uint8_t> visited(n, 0);
    std::vector<int> stack{0};
    visited[0] = 1;
    while (!stack.empty()) {
      const int cur = stack.back();
      const int ci = cur % cells_x;
      const int cj = cur / cells_x;
      int order[4] = {0, 1, 2, 3};
      for (int k = 3; k > 0; --k) std::swap(order[k], order[rng.uniform_int(0, k)]);
      bool advanced = false;
      for (int k = 0; k < 4 && !advanced; ++k) {
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        const int ni = ci + di[order[k]];
        const int nj = cj + dj[order[k]];
        if (ni < 0 || nj < 0 || ni >= cells_x || nj >= cells_y) continue;
        const int nc = nj * cells_x + ni;
        if (visited[nc]) continue;
        if (ni != ci)
          vsolid[vidx(std::max(ci, ni), cj)] = 0;
        else
          hsolid[hidx(ci, std::max(cj, nj))] = 0;
        visited[nc] = 1;
        stack.push_back(nc);
        advanced = true;
      }
      if (!advanced) stack.pop_back();
    }
  }

  // Start/goal regions and open corner rooms.
  WorkspaceMap map;
  map.dimension = 2;
  map.bounds = Box({0.0, 0.0, 0.0}, {wx, wy, 0.0});
  map.corridor_width = c;
  map.wall_thickness = w;
  const bool rooms = cells_x >= 4 && cells_y >= 4;
  const double side = rooms ? 2.0 * p : c;
  Box start_sq({w, w, 0.0}, {w + side, w + side, 0.0});
  Box goal_sq({wx - w - side, wy - w - side, 0.0}, {wx - w, wy - w, 0.0});
  map.start_regions.push_back(start_sq);
  map.goal_region = goal_sq;

  auto inside_room = [&](const Box& b) {
    if (!rooms) return false;
    const double eps = 1e-9;
    auto in = [&](const Box& r) {
      return b.lo.x >= r.lo.x - eps && b.lo.y >= r.lo.y - eps &&
             b.hi.x <= r.hi.x + eps && b.hi.y <= r.hi.y + eps;
    };
    return in(start_sq) || in(goal_sq);
  };
  // Room formation: every wall element inside a start/goal square is removed.
  for (int i = 1; i < cells_x; ++i)
    for (int j = 0; j < cells_y; ++j)
      if (vsolid[vidx(i, j)] && inside_room(lay.vertical(i, j))) vsolid[vidx(i, j)] = 0;
  for (int i = 0; i < cells_x; ++i)
    for (int j = 1; j < cells_y; ++j)
      if (hsolid[hidx(i, j)] && inside_room(lay.horizontal(i, j))) hsolid[hidx(i, j)] = 0;

  // Loop removal over the walls that survived carving.
  {
    struct Slot {
      bool vertical;
      int i, j;
    };
    std::vector<Slot> removable;
    for (int i = 1; i < cells_x; ++i)
      for (int j = 0; j < cells_y; ++j)
        if (vsolid[vidx(i, j)]) removable.push_back({true, i, j});
    for (int i = 0; i < cells_x; ++i)
      for (int j = 1; j < cells_y; ++j)
        if (hsolid[hidx(i, j)]) removable.push_back({false, i, j});
    const int n_remove = static_cast<int>(
        std::lround(loop_fraction * static_cast<double>(removable.size())));
    Rng rng(derive_seed(seed, 2));
    for (int k = 0; k < n_remove; ++k) {
      const int pick = rng.uniform_int(0, static_cast<int>(removable.size()) - 1);
      const Slot s = removable[pick];
      if (s.vertical)
        vsolid[vidx(s.i, s.j)] = 0;
      else
        hsolid[hidx(s.i, s.j)] = 0;
      removable.erase(removable.begin() + pick);
    }
  }

  // Emit obstacle boxes: boundary walls, surviving interior walls, posts.
  for (int j = 0; j < cells_y; ++j) {
    map.obstacles.push_back(lay.vertical(0, j));
    map.obstacles.push_back(lay.vertical(cells_x, j));
  }
  for (int i = 0; i < cells_x; ++i) {
    map.obstacles.push_back(lay.horizontal(i, 0));
    map.obstacles.push_back(lay.horizontal(i, cells_y));
  }
  for (int i = 1; i < cells_x; ++i)
    for (int j = 0; j < cells_y; ++j) {
      if (vsolid[vidx(i, j)])
        map.obstacles.push_back(lay.vertical(i, j));
      else
        map.doors.push_back({lay.vertical(i, j), 0});
    }
  for (int i = 0; i < cells_x; ++i)
    for (int j = 1; j < cells_y; ++j) {
      if (hsolid[hidx(i, j)])
        map.obstacles.push_back(lay.horizontal(i, j));
      else
        map.doors.push_back({lay.horizontal(i, j), 0});
    }
  for (int i = 0; i <= cells_x; ++i)
    for (int j = 0; j <= cells_y; ++j) {
      const Box post = lay.post(i, j);
      if (!inside_room(post)) map.obstacles.push_back(post);
    }
  return map;
}

}  // namespace graphnav

#endif  // GRAPHNAV_MAZE2D_HPP_
