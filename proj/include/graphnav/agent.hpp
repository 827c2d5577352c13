#ifndef GRAPHNAV_AGENT_HPP_
#define GRAPHNAV_AGENT_HPP_

#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphnav/reward.hpp"

namespace graphnav {

// Discrete action set over the continuous action bounds. Holonomic: 8
// compass directions (+ up/down in 3D) at one speed, all with equal step
// length. Unicycle: {0, v_max} x {-w_max, 0, w_max}.
struct ActionSet {
  std::vector<std::vector<double>> actions;

  static ActionSet holonomic(double speed, int dimension) {
    ActionSet set;
    const double d = speed / std::sqrt(2.0);
    set.actions = {{speed, 0.0, 0.0}, {d, d, 0.0},   {0.0, speed, 0.0},
                   {-d, d, 0.0},      {-speed, 0.0, 0.0}, {-d, -d, 0.0},
                   {0.0, -speed, 0.0}, {d, -d, 0.0}};
    if (dimension == 3) {
      set.actions.push_back({0.0, 0.0, speed});
      set.actions.push_back({0.0, 0.0, -speed});
    }
    return set;
  }
  static ActionSet unicycle(double v_max, double omega_max) {
    ActionSet set;
    for (double v : {0.0, v_max})
      for (double w : {-omega_max, 0.0, omega_max}) set.actions.push_back({v, w});
    return set;
  }
  int size() const { return static_cast<int>(actions.size()); }
};

// Quantizing encoder over the augmented state space. The d_min axis has
// dmin_bins finite bins of width dmin_bin_width plus a reserved bin for +inf.
// In relative mode the axis holds the regret d(position) - d_min instead of
// d_min itself: a fresh frontier state is regret 0 no matter where the
// episode started, so experience from different starts lands in shared bins.
struct StateEncoder {
  Vec3 origin;
  double position_resolution = 0.05;
  int nx = 1, ny = 1, nz = 1;
  int dimension = 2;
  int heading_bins = 1;  // >1 only for the unicycle model
  int dmin_bins = 32;
  double dmin_bin_width = 0.05;
  bool relative_dmin = false;

  static StateEncoder for_map(const WorkspaceMap& map, double resolution,
                              double dmin_bin_width, int dmin_bins,
                              int heading_bins = 1) {
    StateEncoder enc;
    enc.origin = map.bounds.lo;
    enc.position_resolution = resolution;
    enc.dimension = map.dimension;
    enc.nx = std::max(1, static_cast<int>(std::ceil((map.bounds.hi.x - map.bounds.lo.x) / resolution)));
    enc.ny = std::max(1, static_cast<int>(std::ceil((map.bounds.hi.y - map.bounds.lo.y) / resolution)));
    enc.nz = map.dimension == 3
                 ? std::max(1, static_cast<int>(std::ceil((map.bounds.hi.z - map.bounds.lo.z) / resolution)))
                 : 1;
    enc.heading_bins = heading_bins;
    enc.dmin_bins = dmin_bins;
    enc.dmin_bin_width = dmin_bin_width;
    return enc;
  }

  // d_at_position: cost-to-go of the ball covering the current position
  // (+inf outside coverage); only consulted in relative mode.
  std::uint64_t encode(const AugmentedState& aug, double d_at_position = kInf) const {
    auto axis = [&](double v, double lo, int n) {
      int i = static_cast<int>((v - lo) / position_resolution);
      return std::clamp(i, 0, n - 1);
    };
    const int ix = axis(aug.state.position.x, origin.x, nx);
    const int iy = axis(aug.state.position.y, origin.y, ny);
    const int iz = dimension == 3 ? axis(aug.state.position.z, origin.z, nz) : 0;
    int ih = 0;
    if (heading_bins > 1) {
      const double two_pi = 2.0 * M_PI;
      double h = std::fmod(aug.state.heading, two_pi);
      if (h < 0.0) h += two_pi;
      ih = std::min(static_cast<int>(h / two_pi * heading_bins), heading_bins - 1);
    }
    int id;
    if (aug.d_min == kInf) {
      id = dmin_bins;  // reserved bin
    } else if (relative_dmin) {
      const double regret =
          d_at_position == kInf ? kInf : std::max(0.0, d_at_position - aug.d_min);
      id = regret == kInf
               ? dmin_bins - 1
               : std::min(static_cast<int>(regret / dmin_bin_width), dmin_bins - 1);
    } else {
      id = std::min(static_cast<int>(aug.d_min / dmin_bin_width), dmin_bins - 1);
    }
    std::uint64_t cell = (static_cast<std::uint64_t>(iz) * ny + iy) * nx + ix;
    return (cell * heading_bins + ih) * (dmin_bins + 1) + id;
  }
};

struct TrainConfig {
  double gamma = 0.99;
  double alpha0 = 0.5;
  double alpha_decay = 1e-3;  // alpha_t = alpha0 / (1 + decay * visits)
  double eps_start = 1.0;
  double eps_end = 0.05;
  std::int64_t eps_decay_steps = 100000;
  int max_episode_steps = 400;
  std::int64_t total_steps = 300000;
  std::int64_t eval_cadence = 2000;
  std::uint64_t seed = 0;

  double epsilon_at(std::int64_t step) const {
    if (step >= eps_decay_steps) return eps_end;
    const double f = static_cast<double>(step) / static_cast<double>(eps_decay_steps);
    return eps_start + (eps_end - eps_start) * f;
  }
};

class QTable {
 public:
  explicit QTable(int n_actions) : n_actions_(n_actions) {}

  double value(std::uint64_t state, int action) const {
    auto it = table_.find(state);
    return it == table_.end() ? 0.0 : it->second.q[action];
  }
  double max_value(std::uint64_t state) const {
    auto it = table_.find(state);
    if (it == table_.end()) return 0.0;
    double best = it->second.q[0];
    for (int a = 1; a < n_actions_; ++a) best = std::max(best, it->second.q[a]);
    return best;
  }
  int argmax(std::uint64_t state) const {
    auto it = table_.find(state);
    if (it == table_.end()) return 0;  // all-zero ties break to index 0
    int best = 0;
    for (int a = 1; a < n_actions_; ++a)
      if (it->second.q[a] > it->second.q[best]) best = a;
    return best;
  }
  int n_actions() const { return n_actions_; }
  std::size_t size() const { return table_.size(); }

  struct Transition {
    std::uint64_t state;
    int action;
    double reward;
    std::uint64_t next_state;
    bool terminal;
  };

  // One Q-learning backup; returns the applied TD error.
  double td_update(const Transition& t, const TrainConfig& cfg) {
    Entry& e = entry(t.state);
    const double target =
        t.reward + (t.terminal ? 0.0 : cfg.gamma * max_value(t.next_state));
    const double alpha =
        cfg.alpha0 / (1.0 + cfg.alpha_decay * static_cast<double>(e.visits[t.action]));
    const double delta = target - e.q[t.action];
    e.q[t.action] += alpha * delta;
    e.visits[t.action] += 1;
    return delta;
  }

  void check_bound(const RewardParams& params, const TrainConfig& cfg) const {
    const double bound =
        std::abs(params.r_minus) / (1.0 - std::min(cfg.gamma, 1.0 - 1e-12)) +
        params.r_plus_plus + 1e-6;
    for (const auto& [state, e] : table_)
      for (int a = 0; a < n_actions_; ++a)
        if (std::abs(e.q[a]) > bound)
          throw std::runtime_error("QTable: value escaped the contraction bound");
  }

  // Versioned checkpoint with sorted key order for diff stability.
  std::string serialize() const {
    std::map<std::uint64_t, const Entry*> sorted;
    for (const auto& [state, e] : table_) sorted[state] = &e;
    std::string s = "graphnav-qtable v1\n";
    s += "actions " + std::to_string(n_actions_) + "\n";
    s += "states " + std::to_string(sorted.size()) + "\n";
    char buf[64];
    for (const auto& [state, e] : sorted) {
      s += std::to_string(state);
      for (int a = 0; a < n_actions_; ++a) {
        std::snprintf(buf, sizeof(buf), " %.17g %u", e->q[a], e->visits[a]);
        s += buf;
      }
      s += "\n";
    }
    return s;
  }

  static QTable deserialize(const std::string& text) {
    const char* p = text.c_str();
    auto next_line = [&]() -> std::string {
      const char* e = p;
      while (*e && *e != '\n') ++e;
      std::string line(p, e);
      p = *e ? e + 1 : e;
      return line;
    };
    if (next_line() != "graphnav-qtable v1")
      throw std::runtime_error("QTable: bad checkpoint header");
    int n_actions = 0;
    std::sscanf(next_line().c_str(), "actions %d", &n_actions);
    std::size_t n_states = 0;
    std::sscanf(next_line().c_str(), "states %zu", &n_states);
    QTable q(n_actions);
    for (std::size_t i = 0; i < n_states; ++i) {
      const std::string line = next_line();
      const char* cp = line.c_str();
      char* end = nullptr;
      const std::uint64_t state = std::strtoull(cp, &end, 10);
      cp = end;
      Entry& e = q.entry(state);
      for (int a = 0; a < n_actions; ++a) {
        e.q[a] = std::strtod(cp, &end);
        cp = end;
        e.visits[a] = static_cast<std::uint32_t>(std::strtoul(cp, &end, 10));
        cp = end;
      }
    }
    return q;
  }

 private:
  struct Entry {
    std::vector<double> q;
    std::vector<std::uint32_t> visits;
  };
  Entry& entry(std::uint64_t state) {
    auto [it, inserted] = table_.try_emplace(state);
    if (inserted) {
      it->second.q.assign(n_actions_, 0.0);
      it->second.visits.assign(n_actions_, 0);
    }
    return it->second;
  }

  int n_actions_;
  std::unordered_map<std::uint64_t, Entry> table_;
};

inline int select_action(const QTable& q, std::uint64_t state, double epsilon,
                         Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("select_action: epsilon outside [0,1]");
  if (epsilon > 0.0 && rng.uniform(0.0, 1.0) < epsilon)
    return rng.uniform_int(0, q.n_actions() - 1);
  return q.argmax(state);
}

// Noiseless one-step successor used by the safety filter.
inline Vec3 noiseless_successor(const DynamicsSpec& spec, const AgentState& s,
                                const std::vector<double>& action, int dimension) {
  AgentState next = s;
  if (spec.model == DynamicsModel::kHolonomicVelocity) {
    for (int i = 0; i < dimension && i < static_cast<int>(action.size()); ++i)
      next.position[i] += action[i] * spec.dt;
  } else {
    next.heading = s.heading + (action.size() > 1 ? action[1] : 0.0) * spec.dt;
    next.position.x += action[0] * spec.dt * std::cos(next.heading);
    next.position.y += action[0] * spec.dt * std::sin(next.heading);
  }
  return next.position;
}

// Distance-based filter: keeps the action when its noiseless successor stays
// at least `clearance` from every obstacle/blocked zone. Otherwise it swaps
// in the action that meets the clearance bar while staying closest to the
// requested direction of motion (so the agent slides along an obstacle
// instead of retreating and oscillating); when no action meets the bar it
// falls back to the one with the best successor clearance.
inline int safety_filter(const WorkspaceMap& map, const BoxIndex& index,
                         const AgentState& s, int action, const ActionSet& set,
                         const DynamicsSpec& spec, double clearance) {
  if (clearance < 0.0)
    throw std::invalid_argument("safety_filter: clearance must be >= 0");
  if (clearance == 0.0) return action;
  auto successor = [&](int a) {
    return noiseless_successor(spec, s, set.actions[a], map.dimension);
  };
  auto successor_clearance = [&](int a) {
    const Vec3 p = successor(a);
    if (index.segment_hits(s.position, p)) return -kInf;
    return index.clearance(p, map.dimension);
  };
  if (successor_clearance(action) >= clearance) return action;
  const Vec3 want = successor(action) - s.position;
  int best = -1;
  double best_dot = -kInf;
  int safest = action;
  double safest_c = -kInf;
  for (int a = 0; a < set.size(); ++a) {
    const double c = successor_clearance(a);
    if (c > safest_c) {
      safest_c = c;
      safest = a;
    }
    if (c < clearance) continue;
    const Vec3 d = successor(a) - s.position;
    const double dot = d.x * want.x + d.y * want.y + d.z * want.z;
    if (dot > best_dot) {
      best_dot = dot;
      best = a;
    }
  }
  return best >= 0 ? best : safest;
}

enum class Termination { kGoal, kCollision, kStepCap };

struct EpisodeStep {
  Vec3 position;
  double heading;
  double d_min;
  int action;
  double reward;
};

struct EpisodeRecord {
  std::uint64_t seed = 0;
  AugmentedState start;
  std::vector<EpisodeStep> steps;  // post-transition snapshots
  Termination termination = Termination::kStepCap;
  double total_reward = 0.0;
  bool success() const { return termination == Termination::kGoal; }
};

// Everything a rollout needs; the map/roadmap members are read-only shares.
struct EnvBundle {
  const WorkspaceMap* map = nullptr;
  const BoxIndex* index = nullptr;
  const Roadmap* roadmap = nullptr;  // graph/tree schemes
  const TreePath* tree = nullptr;    // tree scheme
  DynamicsSpec dynamics;
  StateEncoder encoder;
  RewardParams params;
  ActionSet actions;
  double filter_clearance = 0.0;  // 0 disables the safety filter
};

struct RolloutOptions {
  double epsilon = 0.0;
  bool learn = false;
  std::uint64_t seed = 0;
};

inline double reward_for_transition(const EnvBundle& env, const AugmentedState& prev,
                                    const AugmentedState& next, bool collided) {
  switch (env.params.scheme) {
    case RewardScheme::kGraphGuided:
      return augmented_reward(prev, next, *env.map, env.params, collided);
    case RewardScheme::kTreePath:
      return tree_path_reward(prev, next, *env.tree, *env.map, env.params, collided);
    case RewardScheme::kSparse:
      return sparse_reward(next.state, *env.map, env.params, collided);
    case RewardScheme::kEuclidean:
      return euclidean_reward(prev.state, next.state, *env.map, env.params, collided);
  }
  return 0.0;
}

// Coverage cost at a bare position (no running minimum); +inf for schemes
// without a guidance structure.
inline double scheme_progression(const EnvBundle& env, const Vec3& position) {
  switch (env.params.scheme) {
    case RewardScheme::kGraphGuided:
      return progression(*env.roadmap, position, env.params.rball_radius);
    case RewardScheme::kTreePath:
      return path_progression(*env.tree, position, env.params.rball_radius);
    default:
      return kInf;
  }
}

inline AugmentedState advance_for_scheme(const EnvBundle& env,
                                         const AugmentedState& aug,
                                         const AgentState& next) {
  switch (env.params.scheme) {
    case RewardScheme::kGraphGuided:
      return advance(aug, next, *env.roadmap, env.params);
    case RewardScheme::kTreePath:
      return advance_on_path(aug, next, *env.tree, env.params);
    default:
      return {next, aug.d_min};
  }
}

// One episode of interaction: encode / select / step / advance / reward,
// with optional TD updates and the optional evaluation-time safety filter.
inline EpisodeRecord run_episode(const EnvBundle& env, QTable& q,
                                 const TrainConfig& cfg, const AgentState& start,
                                 const RolloutOptions& opts) {
  Rng rng(opts.seed);
  EpisodeRecord record;
  record.seed = opts.seed;

  AugmentedState aug{start, kInf};
  aug = advance_for_scheme(env, aug, start);
  record.start = aug;

  if (in_goal(*env.map, start.position)) {
    record.termination = Termination::kGoal;
    return record;
  }

  double d_here = scheme_progression(env, aug.state.position);
  for (int step = 0; step < cfg.max_episode_steps; ++step) {
    const std::uint64_t sid = env.encoder.encode(aug, d_here);
    int action = select_action(q, sid, opts.epsilon, rng);
    if (env.filter_clearance > 0.0)
      action = safety_filter(*env.map, *env.index, aug.state, action, env.actions,
                             env.dynamics, env.filter_clearance);
    const StepResult result = step_dynamics(env.dynamics, aug.state,
                                            env.actions.actions[action], rng,
                                            *env.map, env.index);
    AugmentedState next = advance_for_scheme(env, aug, result.state);
    const double d_next = scheme_progression(env, next.state.position);
    const double reward = reward_for_transition(env, aug, next, result.collided);
    const bool at_goal = !result.collided && in_goal(*env.map, next.state.position);
    const bool terminal = result.collided || at_goal;

    if (opts.learn) {
      q.td_update({sid, action, reward, env.encoder.encode(next, d_next), terminal},
                  cfg);
    }
    record.steps.push_back({next.state.position, next.state.heading, next.d_min,
                            action, reward});
    record.total_reward += reward;
    aug = next;
    d_here = d_next;
    if (result.collided) {
      record.termination = Termination::kCollision;
      return record;
    }
    if (at_goal) {
      record.termination = Termination::kGoal;
      return record;
    }
  }
  record.termination = Termination::kStepCap;
  return record;
}

// Delimited export, one transition per line.
inline std::string serialize_records(const std::vector<EpisodeRecord>& records) {
  std::string s = "graphnav-episodes v1\n";
  s += "episode step x y z heading d_min action reward termination\n";
  char buf[256];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EpisodeRecord& r = records[i];
    const char* term = r.termination == Termination::kGoal ? "goal"
                       : r.termination == Termination::kCollision ? "collision"
                                                                  : "step_cap";
    for (std::size_t j = 0; j < r.steps.size(); ++j) {
      const EpisodeStep& st = r.steps[j];
      std::snprintf(buf, sizeof(buf), "%zu %zu %.6f %.6f %.6f %.6f %.17g %d %.6f %s\n",
                    i, j, st.position.x, st.position.y, st.position.z, st.heading,
                    st.d_min, st.action, st.reward, term);
      s += buf;
    }
  }
  return s;
}

}  // namespace graphnav

#endif  // GRAPHNAV_AGENT_HPP_
