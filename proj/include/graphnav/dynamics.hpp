#ifndef GRAPHNAV_DYNAMICS_HPP_
#define GRAPHNAV_DYNAMICS_HPP_

#include <stdexcept>
#include <vector>

#include "graphnav/workspace.hpp"

namespace graphnav {

enum class DynamicsModel { kHolonomicVelocity, kUnicycle };

struct AgentState {
  Vec3 position;
  double heading = 0.0;  // unicycle only
};

struct DynamicsSpec {
  DynamicsModel model = DynamicsModel::kHolonomicVelocity;
  std::vector<double> action_lo;  // per component
  std::vector<double> action_hi;
  double dt = 0.05;
  double noise_scale = 0.0;  // std-dev of additive positional noise, meters

  void validate() const {
    if (dt <= 0.0) throw std::invalid_argument("DynamicsSpec: dt must be positive");
    if (noise_scale < 0.0)
      throw std::invalid_argument("DynamicsSpec: noise_scale must be >= 0");
    if (action_lo.size() != action_hi.size())
      throw std::invalid_argument("DynamicsSpec: mismatched action bounds");
    for (std::size_t i = 0; i < action_lo.size(); ++i)
      if (!(action_lo[i] < action_hi[i]))
        throw std::invalid_argument("DynamicsSpec: degenerate action bounds");
  }
};

struct StepResult {
  AgentState state;
  bool collided = false;
};

// One Euler step of the disturbed dynamics. A colliding motion segment
// leaves the agent at its pre-collision state with collided=true; the
// episode terminates there.
inline StepResult step_dynamics(const DynamicsSpec& spec, const AgentState& s,
                                std::vector<double> action, Rng& rng,
                                const WorkspaceMap& map,
                                const BoxIndex* index = nullptr) {
  for (std::size_t i = 0; i < action.size() && i < spec.action_lo.size(); ++i)
    action[i] = std::clamp(action[i], spec.action_lo[i], spec.action_hi[i]);

  AgentState next = s;
  if (spec.model == DynamicsModel::kHolonomicVelocity) {
    for (int i = 0; i < map.dimension && i < static_cast<int>(action.size()); ++i)
      next.position[i] += action[i] * spec.dt;
  } else {
    const double v = action.size() > 0 ? action[0] : 0.0;
    const double omega = action.size() > 1 ? action[1] : 0.0;
    next.heading = s.heading + omega * spec.dt;
    next.position.x += v * spec.dt * std::cos(next.heading);
    next.position.y += v * spec.dt * std::sin(next.heading);
  }
  if (spec.noise_scale > 0.0) {
    for (int i = 0; i < map.dimension; ++i)
      next.position[i] += rng.gaussian(spec.noise_scale);
  }

  const bool hit = index ? index->segment_hits(s.position, next.position)
                         : !segment_collision_free(map, s.position, next.position);
  if (hit) return {s, true};
  return {next, false};
}

}  // namespace graphnav

#endif  // GRAPHNAV_DYNAMICS_HPP_
