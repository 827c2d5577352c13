#ifndef GRAPHNAV_WORKSPACE_HPP_
#define GRAPHNAV_WORKSPACE_HPP_

#include <cstdio>
#include <deque>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphnav/geometry.hpp"

namespace graphnav {

// Door opening carved into a wall; the box is the free gap region. `region`
// is the floor index for 3D room grids and 0 for 2D mazes.
struct Door {
  Box box;
  int region = 0;
};

struct WorkspaceMap {
  int dimension = 2;  // 2 or 3
  Box bounds;
  std::vector<Box> obstacles;
  Box goal_region;
  std::vector<Box> start_regions;
  std::vector<Box> blocked_zones;  // disturbance-infeasible regions
  std::vector<Door> doors;
  double corridor_width = 0.0;
  double wall_thickness = 0.0;
};

// Uniform-grid broad phase over obstacle and blocked boxes. Rebuilt from a
// map snapshot; the map itself stays a plain value type.
class BoxIndex {
 public:
  explicit BoxIndex(const WorkspaceMap& map) : map_(map) {
    boxes_ = map.obstacles;
    for (const Box& b : map.blocked_zones) boxes_.push_back(b);
    const Vec3 extent = map.bounds.hi - map.bounds.lo;
    const double longest = std::max({extent.x, extent.y, extent.z});
    cell_ = std::max(longest / 48.0, 1e-6);
    for (int i = 0; i < 3; ++i) {
      n_[i] = std::max(1, static_cast<int>(std::ceil(
                              (map.bounds.hi[i] - map.bounds.lo[i]) / cell_)));
    }
    cells_.resize(static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]);
    for (std::size_t bi = 0; bi < boxes_.size(); ++bi) {
      int lo[3], hi[3];
      cell_range(boxes_[bi], lo, hi);
      for (int ix = lo[0]; ix <= hi[0]; ++ix)
        for (int iy = lo[1]; iy <= hi[1]; ++iy)
          for (int iz = lo[2]; iz <= hi[2]; ++iz)
            cells_[flat(ix, iy, iz)].push_back(static_cast<int>(bi));
    }
  }

  bool point_hits(const Vec3& p) const {
    if (!map_.bounds.contains(p)) return true;
    int c[3];
    point_cell(p, c);
    for (int bi : cells_[flat(c[0], c[1], c[2])]) {
      if (boxes_[bi].contains(p)) return true;
    }
    return false;
  }

  bool segment_hits(const Vec3& p, const Vec3& q) const {
    if (!map_.bounds.contains(p) || !map_.bounds.contains(q)) return true;
    Box aabb({std::min(p.x, q.x), std::min(p.y, q.y), std::min(p.z, q.z)},
             {std::max(p.x, q.x), std::max(p.y, q.y), std::max(p.z, q.z)});
    int lo[3], hi[3];
    cell_range(aabb, lo, hi);
    for (int ix = lo[0]; ix <= hi[0]; ++ix)
      for (int iy = lo[1]; iy <= hi[1]; ++iy)
        for (int iz = lo[2]; iz <= hi[2]; ++iz)
          for (int bi : cells_[flat(ix, iy, iz)])
            if (segment_intersects_box(p, q, boxes_[bi])) return true;
    return false;
  }

  // Distance from p to the nearest obstacle/blocked box or bounds face.
  double clearance(const Vec3& p, int dimension) const {
    double best = kInf;
    for (const Box& b : boxes_) best = std::min(best, b.distance_to(p));
    for (int i = 0; i < dimension; ++i) {
      best = std::min(best, p[i] - map_.bounds.lo[i]);
      best = std::min(best, map_.bounds.hi[i] - p[i]);
    }
    return best;
  }

 private:
  std::size_t flat(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n_[1] + iy) * n_[0] + ix;
  }
  void point_cell(const Vec3& p, int out[3]) const {
    for (int i = 0; i < 3; ++i) {
      int c = static_cast<int>((p[i] - map_.bounds.lo[i]) / cell_);
      out[i] = std::clamp(c, 0, n_[i] - 1);
    }
  }
  void cell_range(const Box& b, int lo[3], int hi[3]) const {
    point_cell(b.lo, lo);
    point_cell(b.hi, hi);
  }

  WorkspaceMap map_;
  std::vector<Box> boxes_;
  double cell_ = 0.0;
  int n_[3] = {1, 1, 1};
  std::vector<std::vector<int>> cells_;
};

inline bool is_obstacle(const WorkspaceMap& map, const Vec3& p) {
  if (!map.bounds.contains(p)) return true;
  for (const Box& b : map.obstacles)
    if (b.contains(p)) return true;
  for (const Box& b : map.blocked_zones)
    if (b.contains(p)) return true;
  return false;
}

inline bool segment_collision_free(const WorkspaceMap& map, const Vec3& p,
                                   const Vec3& q) {
  if (!map.bounds.contains(p) || !map.bounds.contains(q)) return false;
  for (const Box& b : map.obstacles)
    if (segment_intersects_box(p, q, b)) return false;
  for (const Box& b : map.blocked_zones)
    if (segment_intersects_box(p, q, b)) return false;
  return true;
}

inline bool in_goal(const WorkspaceMap& map, const Vec3& p) {
  return map.goal_region.contains(p);
}

// Voxel flood fill between region sets; doubles as the connectivity oracle in
// the test suites. Samples voxel centers.
inline bool flood_fill_connected(const WorkspaceMap& map,
                                 const std::vector<Box>& from,
                                 const Box& to, double resolution) {
  if (from.empty()) return false;
  int n[3] = {1, 1, 1};
  for (int i = 0; i < (map.dimension == 3 ? 3 : 2); ++i) {
    n[i] = std::max(1, static_cast<int>(std::round(
                           (map.bounds.hi[i] - map.bounds.lo[i]) / resolution)));
  }
  const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  std::vector<std::uint8_t> state(total, 0);  // 0 unknown, 1 free-visited, 2 wall
  auto flat = [&](int ix, int iy, int iz) {
    return (static_cast<std::size_t>(iz) * n[1] + iy) * n[0] + ix;
  };
  auto center = [&](int ix, int iy, int iz) {
    Vec3 c(map.bounds.lo.x + (ix + 0.5) * resolution,
           map.bounds.lo.y + (iy + 0.5) * resolution, 0.0);
    if (map.dimension == 3) c.z = map.bounds.lo.z + (iz + 0.5) * resolution;
    return c;
  };
  std::deque<std::array<int, 3>> queue;
  auto try_push = [&](int ix, int iy, int iz) {
    if (ix < 0 || iy < 0 || iz < 0 || ix >= n[0] || iy >= n[1] || iz >= n[2])
      return;
    const std::size_t f = flat(ix, iy, iz);
    if (state[f] != 0) return;
    if (is_obstacle(map, center(ix, iy, iz))) {
      state[f] = 2;
      return;
    }
    state[f] = 1;
    queue.push_back({ix, iy, iz});
  };
  for (const Box& src : from) {
    const Vec3 c = src.center();
    int ix = std::clamp(static_cast<int>((c.x - map.bounds.lo.x) / resolution), 0, n[0] - 1);
    int iy = std::clamp(static_cast<int>((c.y - map.bounds.lo.y) / resolution), 0, n[1] - 1);
    int iz = map.dimension == 3
                 ? std::clamp(static_cast<int>((c.z - map.bounds.lo.z) / resolution), 0, n[2] - 1)
                 : 0;
    try_push(ix, iy, iz);
  }
  while (!queue.empty()) {
    auto [ix, iy, iz] = queue.front();
    queue.pop_front();
    if (to.contains(center(ix, iy, iz))) return true;
    try_push(ix + 1, iy, iz);
    try_push(ix - 1, iy, iz);
    try_push(ix, iy + 1, iz);
    try_push(ix, iy - 1, iz);
    if (map.dimension == 3) {
      try_push(ix, iy, iz + 1);
      try_push(ix, iy, iz - 1);
    }
  }
  return false;
}

inline bool start_goal_connected(const WorkspaceMap& map, double resolution) {
  return flood_fill_connected(map, map.start_regions, map.goal_region, resolution);
}

// Appends n seeded-uniform door gaps (from the selected floor/region) to
// blocked_zones of a copy; the input map is never mutated.
inline WorkspaceMap apply_blocked_doors(const WorkspaceMap& map, int n,
                                        int region, std::uint64_t seed,
                                        bool allow_disconnect = false,
                                        double check_resolution = 0.01) {
  std::vector<int> candidates;
  for (std::size_t i = 0; i < map.doors.size(); ++i)
    if (map.doors[i].region == region) candidates.push_back(static_cast<int>(i));
  if (static_cast<int>(candidates.size()) <= n)
    throw std::invalid_argument("apply_blocked_doors: selected region has too few doors");
  WorkspaceMap out = map;
  Rng rng(derive_seed(seed, 0xd00d5ULL));
  for (int k = 0; k < n; ++k) {
    const int pick = rng.uniform_int(0, static_cast<int>(candidates.size()) - 1);
    out.blocked_zones.push_back(map.doors[candidates[pick]].box);
    candidates.erase(candidates.begin() + pick);
  }
  if (n > 0 && !allow_disconnect && !start_goal_connected(out, check_resolution))
    throw std::runtime_error("apply_blocked_doors: blocking disconnects goal from all starts");
  return out;
}

// --- Serialization: versioned text schema, 6 decimal places, lossless for
// the generated geometry. ---

namespace detail {
inline void write_vec(std::string& s, const Vec3& v, int dim) {
  char buf[80];
  if (dim == 3)
    std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f", v.x, v.y, v.z);
  else
    std::snprintf(buf, sizeof(buf), "%.6f %.6f", v.x, v.y);
  s += buf;
}
inline void write_box(std::string& s, const Box& b, int dim) {
  write_vec(s, b.lo, dim);
  s += " ";
  write_vec(s, b.hi, dim);
}
}  // namespace detail

inline std::string serialize_map(const WorkspaceMap& map) {
  std::string s;
  const int d = map.dimension;
  s += "graphnav-map v1\n";
  s += "dimension " + std::to_string(d) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "corridor_width %.6f\n", map.corridor_width);
  s += buf;
  std::snprintf(buf, sizeof(buf), "wall_thickness %.6f\n", map.wall_thickness);
  s += buf;
  s += "bounds ";
  detail::write_box(s, map.bounds, d);
  s += "\n";
  s += "goal ";
  detail::write_box(s, map.goal_region, d);
  s += "\n";
  auto dump_boxes = [&](const char* tag, const std::vector<Box>& boxes) {
    s += tag;
    s += " " + std::to_string(boxes.size()) + "\n";
    for (const Box& b : boxes) {
      detail::write_box(s, b, d);
      s += "\n";
    }
  };
  dump_boxes("obstacles", map.obstacles);
  dump_boxes("starts", map.start_regions);
  dump_boxes("blocked", map.blocked_zones);
  s += "doors " + std::to_string(map.doors.size()) + "\n";
  for (const Door& door : map.doors) {
    s += std::to_string(door.region) + " ";
    detail::write_box(s, door.box, d);
    s += "\n";
  }
  return s;
}

inline WorkspaceMap parse_map(const std::string& text) {
  WorkspaceMap map;
  const char* p = text.c_str();
  auto next_line = [&]() -> std::string {
    const char* e = p;
    while (*e && *e != '\n') ++e;
    std::string line(p, e);
    p = *e ? e + 1 : e;
    return line;
  };
  if (next_line() != "graphnav-map v1")
    throw std::runtime_error("parse_map: bad header");
  auto read_box = [&](const char* line, int dim) {
    Box b;
    if (dim == 3) {
      if (std::sscanf(line, "%lf %lf %lf %lf %lf %lf", &b.lo.x, &b.lo.y, &b.lo.z,
                      &b.hi.x, &b.hi.y, &b.hi.z) != 6)
        throw std::runtime_error("parse_map: bad box");
    } else {
      if (std::sscanf(line, "%lf %lf %lf %lf", &b.lo.x, &b.lo.y, &b.hi.x,
                      &b.hi.y) != 4)
        throw std::runtime_error("parse_map: bad box");
    }
    return b;
  };
  std::string line = next_line();
  std::sscanf(line.c_str(), "dimension %d", &map.dimension);
  line = next_line();
  std::sscanf(line.c_str(), "corridor_width %lf", &map.corridor_width);
  line = next_line();
  std::sscanf(line.c_str(), "wall_thickness %lf", &map.wall_thickness);
  line = next_line();
  map.bounds = read_box(line.c_str() + 7, map.dimension);
  line = next_line();
  map.goal_region = read_box(line.c_str() + 5, map.dimension);
  auto read_boxes = [&](const char* tag, std::vector<Box>& out) {
    line = next_line();
    std::size_t count = 0;
    if (std::sscanf(line.c_str(), (std::string(tag) + " %zu").c_str(), &count) != 1)
      throw std::runtime_error("parse_map: missing section");
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(read_box(next_line().c_str(), map.dimension));
  };
  read_boxes("obstacles", map.obstacles);
  read_boxes("starts", map.start_regions);
  read_boxes("blocked", map.blocked_zones);
  line = next_line();
  std::size_t ndoors = 0;
  std::sscanf(line.c_str(), "doors %zu", &ndoors);
  for (std::size_t i = 0; i < ndoors; ++i) {
    line = next_line();
    Door door;
    int consumed = 0;
    std::sscanf(line.c_str(), "%d%n", &door.region, &consumed);
    door.box = read_box(line.c_str() + consumed, map.dimension);
    map.doors.push_back(door);
  }
  return map;
}

}  // namespace graphnav

#endif  // GRAPHNAV_WORKSPACE_HPP_
