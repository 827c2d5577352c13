#ifndef GRAPHNAV_GRIDMAP_HPP_
#define GRAPHNAV_GRIDMAP_HPP_

#include <cstdio>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphnav/roadmap.hpp"
#include "graphnav/workspace.hpp"

namespace graphnav {

enum class GridConnectivity { kFour, kEight, kSix, kTwentySix };

enum class GridHeuristic { kEuclidean, kManhattan };

struct GridCell {
  int x = 0;
  int y = 0;
  int z = 0;
  bool operator==(const GridCell& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct GridMap {
  double resolution = 0.0;
  int nx = 0, ny = 0, nz = 1;
  int dimension = 2;
  Vec3 origin;
  GridConnectivity connectivity = GridConnectivity::kFour;
  std::vector<std::uint8_t> occupancy;  // 1 = occupied
  std::vector<GridCell> goal_cells;
  std::vector<GridCell> start_cells;

  std::size_t flat(const GridCell& c) const {
    return (static_cast<std::size_t>(c.z) * ny + c.y) * nx + c.x;
  }
  bool in_range(const GridCell& c) const {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < nx && c.y < ny && c.z < nz;
  }
  bool occupied(const GridCell& c) const { return occupancy[flat(c)] != 0; }
  Vec3 center(const GridCell& c) const {
    return {origin.x + (c.x + 0.5) * resolution,
            origin.y + (c.y + 0.5) * resolution,
            dimension == 3 ? origin.z + (c.z + 0.5) * resolution : 0.0};
  }
  Box cell_box(const GridCell& c) const {
    return Box({origin.x + c.x * resolution, origin.y + c.y * resolution,
                dimension == 3 ? origin.z + c.z * resolution : 0.0},
               {origin.x + (c.x + 1) * resolution, origin.y + (c.y + 1) * resolution,
                dimension == 3 ? origin.z + (c.z + 1) * resolution : 0.0});
  }
};

// Uniform discretization; a cell is occupied iff its box overlaps (with
// positive volume) any obstacle or blocked zone.
inline GridMap discretize_env(const WorkspaceMap& map, double resolution,
                              GridConnectivity connectivity) {
  if (resolution <= 0.0)
    throw std::invalid_argument("discretize_env: resolution must be positive");
  if (map.corridor_width > 0.0 && resolution >= map.corridor_width)
    throw std::invalid_argument(
        "discretize_env: resolution must be below the corridor width or every "
        "corridor closes");
  const bool three_d = map.dimension == 3;
  if (three_d && connectivity != GridConnectivity::kSix &&
      connectivity != GridConnectivity::kTwentySix)
    throw std::invalid_argument("discretize_env: 3D map needs 6/26 connectivity");
  if (!three_d && connectivity != GridConnectivity::kFour &&
      connectivity != GridConnectivity::kEight)
    throw std::invalid_argument("discretize_env: 2D map needs 4/8 connectivity");

  GridMap grid;
  grid.resolution = resolution;
  grid.dimension = map.dimension;
  grid.origin = map.bounds.lo;
  grid.connectivity = connectivity;
  grid.nx = std::max(1, static_cast<int>(std::round((map.bounds.hi.x - map.bounds.lo.x) / resolution)));
  grid.ny = std::max(1, static_cast<int>(std::round((map.bounds.hi.y - map.bounds.lo.y) / resolution)));
  grid.nz = three_d
                ? std::max(1, static_cast<int>(std::round((map.bounds.hi.z - map.bounds.lo.z) / resolution)))
                : 1;
  grid.occupancy.assign(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, 0);

  for (int z = 0; z < grid.nz; ++z)
    for (int y = 0; y < grid.ny; ++y)
      for (int x = 0; x < grid.nx; ++x) {
        const GridCell cell{x, y, z};
        const Box cb = grid.cell_box(cell);
        bool occ = false;
        for (const Box& b : map.obstacles)
          if (cb.overlaps_open(b)) {
            occ = true;
            break;
          }
        if (!occ)
          for (const Box& b : map.blocked_zones)
            if (cb.overlaps_open(b)) {
              occ = true;
              break;
            }
        if (occ) {
          grid.occupancy[grid.flat(cell)] = 1;
        } else {
          if (map.goal_region.contains(grid.center(cell))) grid.goal_cells.push_back(cell);
          for (const Box& sr : map.start_regions)
            if (sr.contains(grid.center(cell))) {
              grid.start_cells.push_back(cell);
              break;
            }
        }
      }
  return grid;
}

namespace grid_detail {

inline void neighbor_offsets(const GridMap& g,
                             std::vector<std::array<int, 3>>& out) {
  out.clear();
  switch (g.connectivity) {
    case GridConnectivity::kFour:
      out = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
      break;
    case GridConnectivity::kEight:
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          if (dx || dy) out.push_back({dx, dy, 0});
      break;
    case GridConnectivity::kSix:
      out = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      break;
    case GridConnectivity::kTwentySix:
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dz = -1; dz <= 1; ++dz)
            if (dx || dy || dz) out.push_back({dx, dy, dz});
      break;
  }
}

}  // namespace grid_detail

struct AStarResult {
  std::vector<GridCell> path;  // start..goal
  double cost = 0.0;
};

// A* with admissible heuristics, closed-set pruning, and parent-pointer path
// reconstruction. Ties in the open set break on (f, g, cell index) so runs
// are reproducible. Returns nullopt when the open set empties.
inline std::optional<AStarResult> astar(const GridMap& grid, const GridCell& start,
                                        const GridCell& goal,
                                        GridHeuristic heuristic) {
  if (!grid.in_range(start) || !grid.in_range(goal))
    throw std::invalid_argument("astar: endpoint outside grid");
  if (grid.occupied(start) || grid.occupied(goal))
    throw std::invalid_argument("astar: endpoint occupied");

  const double res = grid.resolution;
  auto h = [&](const GridCell& c) {
    const double dx = std::abs(c.x - goal.x);
    const double dy = std::abs(c.y - goal.y);
    const double dz = std::abs(c.z - goal.z);
    if (heuristic == GridHeuristic::kManhattan) return (dx + dy + dz) * res;
    return std::sqrt(dx * dx + dy * dy + dz * dz) * res;
  };

  const std::size_t total = grid.occupancy.size();
  std::vector<double> g_cost(total, kInf);
  std::vector<std::int64_t> parent(total, -1);
  std::vector<std::uint8_t> closed(total, 0);

  struct OpenItem {
    double f;
    double g;
    std::size_t cell;
    bool operator>(const OpenItem& o) const {
      if (f != o.f) return f > o.f;
      if (g != o.g) return g > o.g;
      return cell > o.cell;
    }
  };
  std::priority_queue<OpenItem, std::vector<OpenItem>, std::greater<OpenItem>> open;

  std::vector<std::array<int, 3>> offsets;
  grid_detail::neighbor_offsets(grid, offsets);

  const std::size_t sflat = grid.flat(start);
  const std::size_t gflat = grid.flat(goal);
  g_cost[sflat] = 0.0;
  open.push({h(start), 0.0, sflat});

  auto unflat = [&](std::size_t f) {
    GridCell c;
    c.x = static_cast<int>(f % grid.nx);
    c.y = static_cast<int>((f / grid.nx) % grid.ny);
    c.z = static_cast<int>(f / (static_cast<std::size_t>(grid.nx) * grid.ny));
    return c;
  };

  while (!open.empty()) {
    const OpenItem top = open.top();
    open.pop();
    if (closed[top.cell] || top.g > g_cost[top.cell]) continue;
    if (top.cell == gflat) {
      AStarResult result;
      result.cost = g_cost[gflat];
      for (std::int64_t f = static_cast<std::int64_t>(gflat); f >= 0;
           f = parent[f])
        result.path.push_back(unflat(static_cast<std::size_t>(f)));
      std::reverse(result.path.begin(), result.path.end());
      return result;
    }
    closed[top.cell] = 1;
    const GridCell cur = unflat(top.cell);
    for (const auto& off : offsets) {
      GridCell nb{cur.x + off[0], cur.y + off[1], cur.z + off[2]};
      if (!grid.in_range(nb)) continue;
      const std::size_t nf = grid.flat(nb);
      if (closed[nf] || grid.occupancy[nf]) continue;
      const double step =
          std::sqrt(static_cast<double>(off[0] * off[0] + off[1] * off[1] +
                                        off[2] * off[2])) *
          res;
      const double tentative = g_cost[top.cell] + step;
      if (tentative < g_cost[nf]) {
        g_cost[nf] = tentative;
        parent[nf] = static_cast<std::int64_t>(top.cell);
        open.push({tentative + h(nb), tentative, nf});
      }
    }
  }
  return std::nullopt;
}

// Grid graph as a roadmap, so the cost-to-go machinery applies unchanged.
inline Roadmap grid_to_roadmap(const GridMap& grid) {
  Roadmap rm;
  std::vector<int> id_of(grid.occupancy.size(), -1);
  for (int z = 0; z < grid.nz; ++z)
    for (int y = 0; y < grid.ny; ++y)
      for (int x = 0; x < grid.nx; ++x) {
        const GridCell c{x, y, z};
        if (grid.occupied(c)) continue;
        id_of[grid.flat(c)] = static_cast<int>(rm.nodes.size());
        rm.nodes.push_back(grid.center(c));
        rm.adjacency.emplace_back();
      }
  std::vector<std::array<int, 3>> offsets;
  grid_detail::neighbor_offsets(grid, offsets);
  for (int z = 0; z < grid.nz; ++z)
    for (int y = 0; y < grid.ny; ++y)
      for (int x = 0; x < grid.nx; ++x) {
        const GridCell c{x, y, z};
        const int u = id_of[grid.flat(c)];
        if (u < 0) continue;
        for (const auto& off : offsets) {
          GridCell nb{c.x + off[0], c.y + off[1], c.z + off[2]};
          if (!grid.in_range(nb)) continue;
          const int v = id_of[grid.flat(nb)];
          if (v < 0 || v <= u) continue;
          const double step =
              std::sqrt(static_cast<double>(off[0] * off[0] + off[1] * off[1] +
                                            off[2] * off[2])) *
              grid.resolution;
          rm.adjacency[u].push_back({v, step});
          rm.adjacency[v].push_back({u, step});
        }
      }
  for (const GridCell& g : grid.goal_cells)
    if (id_of[grid.flat(g)] >= 0) rm.goal_nodes.push_back(id_of[grid.flat(g)]);
  rm.eta = grid.resolution;
  if (!rm.goal_nodes.empty()) rm.cost_to_go = dijkstra_cost_to_go(rm, rm.goal_nodes);
  rm.finalize();
  return rm;
}

// Portable occupancy text grid; '.' free, '#' occupied, one z-layer block at
// a time.
inline std::string serialize_grid(const GridMap& grid) {
  std::string s = "graphnav-grid v1\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "resolution %.17g\n", grid.resolution);
  s += buf;
  std::snprintf(buf, sizeof(buf), "dims %d %d %d dimension %d connectivity %d\n",
                grid.nx, grid.ny, grid.nz, grid.dimension,
                static_cast<int>(grid.connectivity));
  s += buf;
  std::snprintf(buf, sizeof(buf), "origin %.17g %.17g %.17g\n", grid.origin.x,
                grid.origin.y, grid.origin.z);
  s += buf;
  for (int z = 0; z < grid.nz; ++z) {
    for (int y = grid.ny - 1; y >= 0; --y) {
      for (int x = 0; x < grid.nx; ++x)
        s += grid.occupied({x, y, z}) ? '#' : '.';
      s += '\n';
    }
    if (z + 1 < grid.nz) s += '\n';
  }
  return s;
}

inline GridMap parse_grid(const std::string& text) {
  GridMap grid;
  const char* p = text.c_str();
  auto next_line = [&]() -> std::string {
    const char* e = p;
    while (*e && *e != '\n') ++e;
    std::string line(p, e);
    p = *e ? e + 1 : e;
    return line;
  };
  if (next_line() != "graphnav-grid v1")
    throw std::runtime_error("parse_grid: bad header");
  std::string line = next_line();
  std::sscanf(line.c_str(), "resolution %lg", &grid.resolution);
  line = next_line();
  int conn = 0;
  std::sscanf(line.c_str(), "dims %d %d %d dimension %d connectivity %d",
              &grid.nx, &grid.ny, &grid.nz, &grid.dimension, &conn);
  grid.connectivity = static_cast<GridConnectivity>(conn);
  line = next_line();
  std::sscanf(line.c_str(), "origin %lg %lg %lg", &grid.origin.x, &grid.origin.y,
              &grid.origin.z);
  grid.occupancy.assign(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, 0);
  for (int z = 0; z < grid.nz; ++z) {
    for (int y = grid.ny - 1; y >= 0; --y) {
      line = next_line();
      if (static_cast<int>(line.size()) < grid.nx)
        throw std::runtime_error("parse_grid: truncated row");
      for (int x = 0; x < grid.nx; ++x)
        grid.occupancy[grid.flat({x, y, z})] = line[x] == '#' ? 1 : 0;
    }
    if (z + 1 < grid.nz) next_line();
  }
  return grid;
}

}  // namespace graphnav

#endif  // GRAPHNAV_GRIDMAP_HPP_
