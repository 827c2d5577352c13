#ifndef GRAPHNAV_ROADMAP_HPP_
#define GRAPHNAV_ROADMAP_HPP_

#include <cstdio>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphnav/workspace.hpp"

namespace graphnav {

struct RoadmapEdge {
  int to;
  double cost;  // Euclidean length
};

// Hash grid over roadmap nodes for r-ball coverage queries.
class PointGrid {
 public:
  PointGrid() = default;
  PointGrid(const std::vector<Vec3>& points, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i)
      cells_[key(points[i])].push_back(static_cast<int>(i));
  }

  template <typename Fn>
  void for_each_in_ball(const Vec3& p, double r, Fn&& fn) const {
    const int range = static_cast<int>(std::ceil(r / cell_));
    const std::int64_t cx = coord(p.x), cy = coord(p.y), cz = coord(p.z);
    for (std::int64_t ix = cx - range; ix <= cx + range; ++ix)
      for (std::int64_t iy = cy - range; iy <= cy + range; ++iy)
        for (std::int64_t iz = cz - range; iz <= cz + range; ++iz) {
          auto it = cells_.find(pack(ix, iy, iz));
          if (it == cells_.end()) continue;
          for (int id : it->second) fn(id);
        }
  }

  bool empty() const { return cells_.empty(); }

 private:
  std::int64_t coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
  }
  std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return (static_cast<std::uint64_t>(x & 0x1fffff) << 42) |
           (static_cast<std::uint64_t>(y & 0x1fffff) << 21) |
           static_cast<std::uint64_t>(z & 0x1fffff);
  }
  std::uint64_t key(const Vec3& p) const {
    return pack(coord(p.x), coord(p.y), coord(p.z));
  }

  double cell_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

struct Roadmap {
  std::vector<Vec3> nodes;
  std::vector<std::vector<RoadmapEdge>> adjacency;  // symmetric
  std::vector<double> cost_to_go;                   // +inf when unreachable
  std::vector<int> goal_nodes;
  double eta = 0.0;
  bool goal_connected = false;  // some start region covered by a finite-cost node
  PointGrid index;              // built by finalize()
  // Obstacle index of the map the roadmap was built on. When present,
  // coverage queries require line of sight to the covering node, so a node
  // on the far side of a thin wall cannot claim the agent.
  std::shared_ptr<const BoxIndex> visibility;

  void finalize() {
    index = PointGrid(nodes, std::max(eta, 1e-6));
  }
};

inline Vec3 steer(const Vec3& s, const Vec3& target, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("steer: eta must be positive");
  const Vec3 delta = target - s;
  const double len = norm(delta);
  if (len <= eta) return target;
  return s + delta * (eta / len);
}

// Multi-source Dijkstra from the goal node set; +inf encodes unreachability.
inline std::vector<double> dijkstra_cost_to_go(const Roadmap& roadmap,
                                               const std::vector<int>& goal_nodes) {
  if (goal_nodes.empty())
    throw std::invalid_argument("dijkstra_cost_to_go: goal_nodes empty");
  std::vector<double> dist(roadmap.nodes.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int g : goal_nodes) {
    dist[g] = 0.0;
    heap.push({0.0, g});
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;  // stale entry
    for (const RoadmapEdge& e : roadmap.adjacency[u]) {
      const double nd = d + e.cost;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        heap.push({nd, e.to});
      }
    }
  }
  return dist;
}

// Literal reading of the construction algorithm: one single-source run per
// goal node, combined by min. Same output as the multi-source pass; kept for
// differential testing.
inline std::vector<double> dijkstra_cost_to_go_literal(
    const Roadmap& roadmap, const std::vector<int>& goal_nodes) {
  std::vector<double> best(roadmap.nodes.size(), kInf);
  for (int g : goal_nodes) {
    const std::vector<double> d = dijkstra_cost_to_go(roadmap, {g});
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::min(best[i], d[i]);
  }
  return best;
}

// RRG construction: seeded uniform sampling, nearest-neighbor steer, and
// connection to every collision-free node within near_radius, followed by
// the cost-to-go pass from all goal-region nodes. A goal-region node is
// force-inserted when sampling produced none.
inline Roadmap build_rrg(const WorkspaceMap& map, int n_samples, double eta,
                         double near_radius, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("build_rrg: n_samples must be >= 1");
  if (eta <= 0.0 || near_radius <= 0.0)
    throw std::invalid_argument("build_rrg: eta and near_radius must be positive");

  auto collider_ptr = std::make_shared<const BoxIndex>(map);
  const BoxIndex& collider = *collider_ptr;
  Roadmap rm;
  rm.eta = eta;
  rm.visibility = collider_ptr;

  auto nearest = [&](const Vec3& p) {
    int best = -1;
    double best_d = kInf;
    for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
      const double d = distance(rm.nodes[i], p);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  };
  auto connect_near = [&](int id) {
    const Vec3& p = rm.nodes[id];
    for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
      if (static_cast<int>(i) == id) continue;
      const double d = distance(rm.nodes[i], p);
      if (d > near_radius || d == 0.0) continue;
      if (collider.segment_hits(rm.nodes[i], p)) continue;
      rm.adjacency[id].push_back({static_cast<int>(i), d});
      rm.adjacency[i].push_back({id, d});
    }
  };
  auto add_node = [&](const Vec3& p) {
    rm.nodes.push_back(p);
    rm.adjacency.emplace_back();
    return static_cast<int>(rm.nodes.size()) - 1;
  };

  // Root the graph in the first start region (the construction algorithm
  // initializes with the start node).
  Vec3 root = map.start_regions.empty() ? map.bounds.center()
                                        : map.start_regions.front().center();
  if (!collider.point_hits(root)) add_node(root);

  Rng rng(derive_seed(seed, 4));
  for (int i = 0; i < n_samples; ++i) {
    Vec3 sample(rng.uniform(map.bounds.lo.x, map.bounds.hi.x),
                rng.uniform(map.bounds.lo.y, map.bounds.hi.y), 0.0);
    if (map.dimension == 3)
      sample.z = rng.uniform(map.bounds.lo.z, map.bounds.hi.z);
    if (rm.nodes.empty()) {
      if (!collider.point_hits(sample)) add_node(sample);
      continue;
    }
    const int near_id = nearest(sample);
    const Vec3 candidate = steer(rm.nodes[near_id], sample, eta);
    if (collider.segment_hits(rm.nodes[near_id], candidate)) continue;
    const int id = add_node(candidate);
    const double d = distance(rm.nodes[near_id], candidate);
    if (d > 0.0) {
      rm.adjacency[id].push_back({near_id, d});
      rm.adjacency[near_id].push_back({id, d});
    }
    // near-neighbor connections (the steer edge is already present)
    const Vec3& p = rm.nodes[id];
    for (std::size_t j = 0; j + 1 < rm.nodes.size(); ++j) {
      if (static_cast<int>(j) == near_id) continue;
      const double dj = distance(rm.nodes[j], p);
      if (dj > near_radius || dj == 0.0) continue;
      if (collider.segment_hits(rm.nodes[j], p)) continue;
      rm.adjacency[id].push_back({static_cast<int>(j), dj});
      rm.adjacency[j].push_back({id, dj});
    }
  }

  for (std::size_t i = 0; i < rm.nodes.size(); ++i)
    if (map.goal_region.contains(rm.nodes[i]))
      rm.goal_nodes.push_back(static_cast<int>(i));
  if (rm.goal_nodes.empty()) {
    const Vec3 gc = map.goal_region.center();
    const int id = add_node(gc);
    connect_near(id);
    rm.goal_nodes.push_back(id);
  }

  rm.cost_to_go = dijkstra_cost_to_go(rm, rm.goal_nodes);
  rm.finalize();

  // Connectivity report: does any start region contain a finite-cost node?
  rm.goal_connected = false;
  for (std::size_t i = 0; i < rm.nodes.size() && !rm.goal_connected; ++i)
    if (rm.cost_to_go[i] < kInf)
      for (const Box& sr : map.start_regions)
        if (sr.inflated(near_radius).contains(rm.nodes[i])) {
          rm.goal_connected = true;
          break;
        }
  return rm;
}

struct CoveringNode {
  int id;
  double cost_to_go;
};

// Minimal-cost finite node whose r-ball covers s (ties to the smaller id).
inline std::optional<CoveringNode> nearest_covering_node(const Roadmap& roadmap,
                                                         const Vec3& s, double r) {
  if (r <= 0.0) throw std::invalid_argument("nearest_covering_node: r must be positive");
  int best = -1;
  double best_cost = kInf;
  auto consider = [&](int id) {
    const double c = roadmap.cost_to_go[id];
    if (c == kInf) return;
    if (distance(roadmap.nodes[id], s) > r) return;
    if (roadmap.visibility && roadmap.visibility->segment_hits(s, roadmap.nodes[id]))
      return;
    if (c < best_cost || (c == best_cost && id < best)) {
      best_cost = c;
      best = id;
    }
  };
  if (!roadmap.index.empty()) {
    roadmap.index.for_each_in_ball(s, r, consider);
  } else {
    for (std::size_t i = 0; i < roadmap.nodes.size(); ++i)
      consider(static_cast<int>(i));
  }
  if (best < 0) return std::nullopt;
  return CoveringNode{best, best_cost};
}

// Edge-disjoint path count via max-flow with unit edge capacities.
inline int count_disjoint_paths(const Roadmap& roadmap, int from, int to) {
  const int n = static_cast<int>(roadmap.nodes.size());
  if (from < 0 || to < 0 || from >= n || to >= n)
    throw std::invalid_argument("count_disjoint_paths: node id out of range");
  if (from == to) return 0;
  // Undirected unit edge -> one residual pair shared by both directions.
  struct Arc {
    int to;
    int cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(n);
  auto add_undirected = [&](int u, int v) {
    out[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, 1});
    out[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, 1});
  };
  for (int u = 0; u < n; ++u)
    for (const RoadmapEdge& e : roadmap.adjacency[u])
      if (u < e.to) add_undirected(u, e.to);

  int flow = 0;
  while (true) {
    std::vector<int> parent_arc(n, -1);
    std::vector<std::uint8_t> seen(n, 0);
    std::deque<int> q{from};
    seen[from] = 1;
    while (!q.empty() && !seen[to]) {
      const int u = q.front();
      q.pop_front();
      for (int ai : out[u]) {
        if (arcs[ai].cap <= 0) continue;
        const int v = arcs[ai].to;
        if (seen[v]) continue;
        seen[v] = 1;
        parent_arc[v] = ai;
        q.push_back(v);
      }
    }
    if (!seen[to]) break;
    for (int v = to; v != from;) {
      const int ai = parent_arc[v];
      arcs[ai].cap -= 1;
      arcs[ai ^ 1].cap += 1;
      // walk back: the arc ai points to v from its tail
      int tail = arcs[ai ^ 1].to;
      v = tail;
    }
    ++flow;
  }
  return flow;
}

// --- Serialization: node table, edge table, cost_to_go column; lossless. ---

inline std::string serialize_roadmap(const Roadmap& rm) {
  std::string s = "graphnav-roadmap v1\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "eta %.17g\n", rm.eta);
  s += buf;
  s += "nodes " + std::to_string(rm.nodes.size()) + "\n";
  for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", rm.nodes[i].x,
                  rm.nodes[i].y, rm.nodes[i].z, rm.cost_to_go[i]);
    s += buf;
  }
  std::size_t n_edges = 0;
  for (std::size_t u = 0; u < rm.adjacency.size(); ++u)
    for (const RoadmapEdge& e : rm.adjacency[u])
      if (static_cast<int>(u) < e.to) ++n_edges;
  s += "edges " + std::to_string(n_edges) + "\n";
  for (std::size_t u = 0; u < rm.adjacency.size(); ++u)
    for (const RoadmapEdge& e : rm.adjacency[u])
      if (static_cast<int>(u) < e.to) {
        std::snprintf(buf, sizeof(buf), "%zu %d %.17g\n", u, e.to, e.cost);
        s += buf;
      }
  s += "goal_nodes";
  for (int g : rm.goal_nodes) s += " " + std::to_string(g);
  s += "\n";
  return s;
}

inline Roadmap parse_roadmap(const std::string& text) {
  Roadmap rm;
  const char* p = text.c_str();
  auto next_line = [&]() -> std::string {
    const char* e = p;
    while (*e && *e != '\n') ++e;
    std::string line(p, e);
    p = *e ? e + 1 : e;
    return line;
  };
  if (next_line() != "graphnav-roadmap v1")
    throw std::runtime_error("parse_roadmap: bad header");
  std::string line = next_line();
  std::sscanf(line.c_str(), "eta %lg", &rm.eta);
  line = next_line();
  std::size_t n_nodes = 0;
  std::sscanf(line.c_str(), "nodes %zu", &n_nodes);
  rm.nodes.reserve(n_nodes);
  rm.cost_to_go.reserve(n_nodes);
  rm.adjacency.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    line = next_line();
    Vec3 v;
    double cost = 0.0;
    // "inf" round-trips through %lg as infinity
    if (std::sscanf(line.c_str(), "%lg %lg %lg %lg", &v.x, &v.y, &v.z, &cost) != 4)
      throw std::runtime_error("parse_roadmap: bad node line");
    rm.nodes.push_back(v);
    rm.cost_to_go.push_back(cost);
  }
  line = next_line();
  std::size_t n_edges = 0;
  std::sscanf(line.c_str(), "edges %zu", &n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    line = next_line();
    std::size_t u = 0;
    int v = 0;
    double cost = 0.0;
    if (std::sscanf(line.c_str(), "%zu %d %lg", &u, &v, &cost) != 3)
      throw std::runtime_error("parse_roadmap: bad edge line");
    rm.adjacency[u].push_back({v, cost});
    rm.adjacency[v].push_back({static_cast<int>(u), cost});
  }
  line = next_line();
  if (line.rfind("goal_nodes", 0) != 0)
    throw std::runtime_error("parse_roadmap: missing goal_nodes");
  const char* q = line.c_str() + 10;
  int g = 0, consumed = 0;
  while (std::sscanf(q, "%d%n", &g, &consumed) == 1) {
    rm.goal_nodes.push_back(g);
    q += consumed;
  }
  rm.goal_connected = true;
  rm.finalize();
  return rm;
}

}  // namespace graphnav

#endif  // GRAPHNAV_ROADMAP_HPP_
