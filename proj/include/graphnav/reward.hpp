#ifndef GRAPHNAV_REWARD_HPP_
#define GRAPHNAV_REWARD_HPP_

#include <stdexcept>
#include <vector>

#include "graphnav/dynamics.hpp"
#include "graphnav/roadmap.hpp"

namespace graphnav {

enum class RewardScheme { kGraphGuided, kTreePath, kSparse, kEuclidean };

struct RewardParams {
  double r_minus = -1.0;
  double r_plus = 1.0;
  double r_plus_plus = 100.0;
  double rball_radius = 0.05;  // default eta/2
  RewardScheme scheme = RewardScheme::kGraphGuided;
  double euclid_deadband = 0.0125;  // rball_radius / 4 unless configured

  void validate() const {
    if (!(r_minus < 0.0)) throw std::invalid_argument("RewardParams: r_minus must be negative");
    if (!(r_plus > 0.0)) throw std::invalid_argument("RewardParams: r_plus must be positive");
    if (!(r_plus_plus >= 10.0 * r_plus))
      throw std::invalid_argument("RewardParams: r_plus_plus must dominate (>= 10 r_plus)");
    if (!(rball_radius > 0.0))
      throw std::invalid_argument("RewardParams: rball_radius must be positive");
  }
};

// Element of the augmented state space: physical state plus the running
// minimum cost-to-go. d_min stays +inf until the agent first enters some
// node's r-ball.
struct AugmentedState {
  AgentState state;
  double d_min = kInf;
};

// Cost-to-go of the covering node's r-ball, or +inf outside all balls.
inline double progression(const Roadmap& roadmap, const Vec3& s, double r) {
  const auto covering = nearest_covering_node(roadmap, s, r);
  return covering ? covering->cost_to_go : kInf;
}

inline AugmentedState advance(const AugmentedState& aug, const AgentState& next,
                              const Roadmap& roadmap, const RewardParams& params) {
  const double d = progression(roadmap, next.position, params.rball_radius);
  return {next, std::min(aug.d_min, d)};
}

// Augmented reward: obstacle branch dominates goal, goal dominates progress.
// `collided` marks a transition whose motion segment hit an obstacle (the
// agent is returned pre-collision, so the flag carries the obstacle branch).
inline double augmented_reward(const AugmentedState& prev,
                               const AugmentedState& next,
                               const WorkspaceMap& map, const RewardParams& params,
                               bool collided = false) {
  if (collided || is_obstacle(map, next.state.position)) return params.r_minus;
  if (in_goal(map, next.state.position)) return params.r_plus_plus;
  if (next.d_min < prev.d_min) return params.r_plus;  // inf -> finite counts
  return 0.0;
}

// Original sparse reward.
inline double sparse_reward(const AgentState& next, const WorkspaceMap& map,
                            const RewardParams& params, bool collided = false) {
  if (collided || is_obstacle(map, next.position)) return params.r_minus;
  if (in_goal(map, next.position)) return params.r_plus_plus;
  return 0.0;
}

// Single fixed waypoint path with per-waypoint cost-to-go; the tree-based
// baseline's guidance degrades to a sparse signal once this path is blocked.
struct TreePath {
  std::vector<Vec3> waypoints;
  std::vector<double> costs;
};

// Cost-to-go-greedy walk from the point's covering node down to a goal node.
// Waypoints are densified to spacing <= r so consecutive r-balls overlap and
// coverage is continuous along the path.
inline TreePath extract_tree_path(const Roadmap& roadmap, const Vec3& from,
                                  double r) {
  TreePath path;
  auto covering = nearest_covering_node(roadmap, from, r);
  if (!covering) {
    // fall back to the nearest finite-cost node
    int best = -1;
    double best_d = kInf;
    for (std::size_t i = 0; i < roadmap.nodes.size(); ++i) {
      if (roadmap.cost_to_go[i] == kInf) continue;
      const double d = distance(roadmap.nodes[i], from);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return path;
    covering = CoveringNode{best, roadmap.cost_to_go[best]};
  }
  int cur = covering->id;
  path.waypoints.push_back(roadmap.nodes[cur]);
  path.costs.push_back(roadmap.cost_to_go[cur]);
  while (roadmap.cost_to_go[cur] > 0.0) {
    int next = -1;
    double best = roadmap.cost_to_go[cur];
    for (const RoadmapEdge& e : roadmap.adjacency[cur]) {
      if (roadmap.cost_to_go[e.to] < best) {
        best = roadmap.cost_to_go[e.to];
        next = e.to;
      }
    }
    if (next < 0) break;  // local minimum; cannot happen on a consistent field
    const Vec3 a = roadmap.nodes[cur];
    const Vec3 b = roadmap.nodes[next];
    const double ca = roadmap.cost_to_go[cur];
    const double cb = roadmap.cost_to_go[next];
    const double len = distance(a, b);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / r)));
    for (int k = 1; k <= pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      path.waypoints.push_back(a + (b - a) * t);
      path.costs.push_back(ca + (cb - ca) * t);
    }
    cur = next;
  }
  return path;
}

inline double path_progression(const TreePath& path, const Vec3& s, double r) {
  double best = kInf;
  for (std::size_t i = 0; i < path.waypoints.size(); ++i)
    if (distance(path.waypoints[i], s) <= r) best = std::min(best, path.costs[i]);
  return best;
}

inline AugmentedState advance_on_path(const AugmentedState& aug,
                                      const AgentState& next, const TreePath& path,
                                      const RewardParams& params) {
  const double d = path_progression(path, next.position, params.rball_radius);
  return {next, std::min(aug.d_min, d)};
}

// Same branch structure as augmented_reward, progression restricted to the
// fixed path's r-balls.
inline double tree_path_reward(const AugmentedState& prev, const AugmentedState& next,
                               const TreePath& path, const WorkspaceMap& map,
                               const RewardParams& params, bool collided = false) {
  if (path.waypoints.empty())
    throw std::invalid_argument("tree_path_reward: empty path");
  return augmented_reward(prev, next, map, params, collided);
}

// Distance-based baseline: progress means the straight-line distance to the
// goal center shrinks by more than the deadband.
inline double euclidean_reward(const AgentState& prev, const AgentState& next,
                               const WorkspaceMap& map, const RewardParams& params,
                               bool collided = false) {
  if (collided || is_obstacle(map, next.position)) return params.r_minus;
  if (in_goal(map, next.position)) return params.r_plus_plus;
  const Vec3 gc = map.goal_region.center();
  if (distance(next.position, gc) < distance(prev.position, gc) - params.euclid_deadband)
    return params.r_plus;
  return 0.0;
}

// Exponential potential of the shaping construction.
inline double potential(double d_min_t, double d0, double C, double k) {
  if (k <= 0.0) throw std::invalid_argument("potential: k must be positive");
  if (!(d_min_t <= d0)) return 0.0;
  return C * (1.0 - std::exp(-k * (d0 - d_min_t)));
}

// Residual between the augmented reward and its potential-based shaping form
// (gamma = 1, C = R+, d0 = previous d_min). Test-suite diagnostic only.
inline double shaping_residual(const AugmentedState& prev, const AugmentedState& next,
                               const WorkspaceMap& map, const RewardParams& params,
                               double k) {
  if (is_obstacle(map, next.state.position) || in_goal(map, next.state.position))
    throw std::invalid_argument("shaping_residual: terminal transition");
  if (prev.d_min == kInf)
    throw std::invalid_argument("shaping_residual: undefined for infinite prior d_min");
  const double r_tilde = augmented_reward(prev, next, map, params);
  const double r_hat = sparse_reward(next.state, map, params);
  const double d0 = prev.d_min;
  const double shaped = r_hat + potential(next.d_min, d0, params.r_plus, k) -
                        potential(prev.d_min, d0, params.r_plus, k);
  return r_tilde - shaped;
}

}  // namespace graphnav

#endif  // GRAPHNAV_REWARD_HPP_
