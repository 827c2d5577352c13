#ifndef GRAPHNAV_HARNESS_HPP_
#define GRAPHNAV_HARNESS_HPP_

#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphnav/agent.hpp"
#include "graphnav/gridmap.hpp"
#include "graphnav/maze2d.hpp"
#include "graphnav/roomgrid3d.hpp"

namespace graphnav {

using nlohmann::json;

struct EnvironmentSpec {
  std::string type = "maze2d";  // maze2d | roomgrid3d
  int cells_x = 8, cells_y = 8;
  double loop_fraction = 0.15;
  double wall_thickness = 0.02;
  double corridor_width = 0.14;
  int floors = 3, rooms_per_side = 3;
  double room_size = 0.25;
  double door_width = 0.14;
  int start_region_index = -1;  // -1: all start regions
};

struct PlannerSpec {
  int n_samples = 4000;
  double eta = 0.1;
  double near_radius = 0.2;
};

struct DynamicsConfig {
  std::string model = "holonomic";  // holonomic | unicycle
  double speed = 0.8;               // holonomic speed / unicycle v_max
  double omega_max = 2.0;
  double dt = 0.1;
  double noise_scale = 0.0;
};

struct EvaluationSpec {
  int trials = 200;
  int n_test_starts = 10;
  std::string score_variant = "gamma_pow_steps";  // or steps_pow_gamma
  double filter_clearance = 0.0;
  double noise_scale = 0.0;  // actuation noise during certificate trials
  std::vector<Box> inject_obstacles;  // unseen boxes added at evaluation
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  EnvironmentSpec environment;
  PlannerSpec planner;
  RewardParams reward;
  DynamicsConfig dynamics;
  TrainConfig train;
  EvaluationSpec evaluation;
  double position_resolution = 0.0;  // 0: derived from speed * dt
  double dmin_bin_width = 0.0;       // 0: derived from rball_radius
  std::vector<Vec3> test_starts;     // frozen once resolved
};

inline RewardScheme parse_scheme(const std::string& name) {
  if (name == "graph" || name == "graph_guided") return RewardScheme::kGraphGuided;
  if (name == "tree" || name == "tree_path") return RewardScheme::kTreePath;
  if (name == "sparse") return RewardScheme::kSparse;
  if (name == "euclid" || name == "euclidean") return RewardScheme::kEuclidean;
  throw std::invalid_argument("unknown reward scheme: " + name);
}

inline std::string scheme_name(RewardScheme scheme) {
  switch (scheme) {
    case RewardScheme::kGraphGuided: return "graph";
    case RewardScheme::kTreePath: return "tree";
    case RewardScheme::kSparse: return "sparse";
    case RewardScheme::kEuclidean: return "euclid";
  }
  return "?";
}

inline json box_to_json(const Box& b) {
  return json::array({b.lo.x, b.lo.y, b.lo.z, b.hi.x, b.hi.y, b.hi.z});
}
inline Box box_from_json(const json& j) {
  return Box({j[0], j[1], j[2]}, {j[3], j[4], j[5]});
}

inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["version"] = 1;
  j["seed"] = c.seed;
  j["environment"] = {{"type", c.environment.type},
                      {"cells_x", c.environment.cells_x},
                      {"cells_y", c.environment.cells_y},
                      {"loop_fraction", c.environment.loop_fraction},
                      {"wall_thickness", c.environment.wall_thickness},
                      {"corridor_width", c.environment.corridor_width},
                      {"floors", c.environment.floors},
                      {"rooms_per_side", c.environment.rooms_per_side},
                      {"room_size", c.environment.room_size},
                      {"door_width", c.environment.door_width},
                      {"start_region_index", c.environment.start_region_index}};
  j["planner"] = {{"n_samples", c.planner.n_samples},
                  {"eta", c.planner.eta},
                  {"near_radius", c.planner.near_radius}};
  j["reward"] = {{"r_minus", c.reward.r_minus},
                 {"r_plus", c.reward.r_plus},
                 {"r_plus_plus", c.reward.r_plus_plus},
                 {"rball_radius", c.reward.rball_radius},
                 {"scheme", scheme_name(c.reward.scheme)},
                 {"euclid_deadband", c.reward.euclid_deadband}};
  j["dynamics"] = {{"model", c.dynamics.model},
                   {"speed", c.dynamics.speed},
                   {"omega_max", c.dynamics.omega_max},
                   {"dt", c.dynamics.dt},
                   {"noise_scale", c.dynamics.noise_scale}};
  j["train"] = {{"gamma", c.train.gamma},
                {"alpha0", c.train.alpha0},
                {"alpha_decay", c.train.alpha_decay},
                {"eps_start", c.train.eps_start},
                {"eps_end", c.train.eps_end},
                {"eps_decay_steps", c.train.eps_decay_steps},
                {"max_episode_steps", c.train.max_episode_steps},
                {"total_steps", c.train.total_steps},
                {"eval_cadence", c.train.eval_cadence}};
  j["evaluation"] = {{"trials", c.evaluation.trials},
                     {"n_test_starts", c.evaluation.n_test_starts},
                     {"score_variant", c.evaluation.score_variant},
                     {"filter_clearance", c.evaluation.filter_clearance},
                     {"noise_scale", c.evaluation.noise_scale}};
  j["evaluation"]["inject_obstacles"] = json::array();
  for (const Box& b : c.evaluation.inject_obstacles)
    j["evaluation"]["inject_obstacles"].push_back(box_to_json(b));
  j["position_resolution"] = c.position_resolution;
  j["dmin_bin_width"] = c.dmin_bin_width;
  j["test_starts"] = json::array();
  for (const Vec3& p : c.test_starts)
    j["test_starts"].push_back(json::array({p.x, p.y, p.z}));
  return j;
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.seed = j.value("seed", 0ULL);
  if (j.contains("environment")) {
    const json& e = j["environment"];
    c.environment.type = e.value("type", c.environment.type);
    c.environment.cells_x = e.value("cells_x", c.environment.cells_x);
    c.environment.cells_y = e.value("cells_y", c.environment.cells_y);
    c.environment.loop_fraction = e.value("loop_fraction", c.environment.loop_fraction);
    c.environment.wall_thickness = e.value("wall_thickness", c.environment.wall_thickness);
    c.environment.corridor_width = e.value("corridor_width", c.environment.corridor_width);
    c.environment.floors = e.value("floors", c.environment.floors);
    c.environment.rooms_per_side = e.value("rooms_per_side", c.environment.rooms_per_side);
    c.environment.room_size = e.value("room_size", c.environment.room_size);
    c.environment.door_width = e.value("door_width", c.environment.door_width);
    c.environment.start_region_index =
        e.value("start_region_index", c.environment.start_region_index);
  }
  if (j.contains("planner")) {
    const json& p = j["planner"];
    c.planner.n_samples = p.value("n_samples", c.planner.n_samples);
    c.planner.eta = p.value("eta", c.planner.eta);
    c.planner.near_radius = p.value("near_radius", c.planner.near_radius);
  }
  if (j.contains("reward")) {
    const json& r = j["reward"];
    c.reward.r_minus = r.value("r_minus", c.reward.r_minus);
    c.reward.r_plus = r.value("r_plus", c.reward.r_plus);
    c.reward.r_plus_plus = r.value("r_plus_plus", c.reward.r_plus_plus);
    c.reward.rball_radius = r.value("rball_radius", c.reward.rball_radius);
    if (r.contains("scheme")) c.reward.scheme = parse_scheme(r["scheme"]);
    c.reward.euclid_deadband = r.value("euclid_deadband", c.reward.rball_radius / 4.0);
  }
  if (j.contains("dynamics")) {
    const json& d = j["dynamics"];
    c.dynamics.model = d.value("model", c.dynamics.model);
    c.dynamics.speed = d.value("speed", c.dynamics.speed);
    c.dynamics.omega_max = d.value("omega_max", c.dynamics.omega_max);
    c.dynamics.dt = d.value("dt", c.dynamics.dt);
    c.dynamics.noise_scale = d.value("noise_scale", c.dynamics.noise_scale);
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    c.train.gamma = t.value("gamma", c.train.gamma);
    c.train.alpha0 = t.value("alpha0", c.train.alpha0);
    c.train.alpha_decay = t.value("alpha_decay", c.train.alpha_decay);
    c.train.eps_start = t.value("eps_start", c.train.eps_start);
    c.train.eps_end = t.value("eps_end", c.train.eps_end);
    c.train.eps_decay_steps = t.value("eps_decay_steps", c.train.eps_decay_steps);
    c.train.max_episode_steps = t.value("max_episode_steps", c.train.max_episode_steps);
    c.train.total_steps = t.value("total_steps", c.train.total_steps);
    c.train.eval_cadence = t.value("eval_cadence", c.train.eval_cadence);
  }
  if (j.contains("evaluation")) {
    const json& e = j["evaluation"];
    c.evaluation.trials = e.value("trials", c.evaluation.trials);
    c.evaluation.n_test_starts = e.value("n_test_starts", c.evaluation.n_test_starts);
    c.evaluation.score_variant = e.value("score_variant", c.evaluation.score_variant);
    c.evaluation.filter_clearance = e.value("filter_clearance", c.evaluation.filter_clearance);
    c.evaluation.noise_scale = e.value("noise_scale", c.evaluation.noise_scale);
    if (e.contains("inject_obstacles"))
      for (const json& b : e["inject_obstacles"])
        c.evaluation.inject_obstacles.push_back(box_from_json(b));
  }
  c.position_resolution = j.value("position_resolution", 0.0);
  c.dmin_bin_width = j.value("dmin_bin_width", 0.0);
  if (j.contains("test_starts"))
    for (const json& p : j["test_starts"])
      c.test_starts.push_back({p[0], p[1], p[2]});
  return c;
}

// Fully materialized experiment: maps, roadmap, tree path, encoder, actions.
// `execution_map` may differ from the planning map (blocked doors, unseen
// obstacles); the roadmap always comes from the clean planning map.
struct Experiment {
  ExperimentConfig config;  // resolved (test starts frozen, resolution set)
  WorkspaceMap planning_map;
  WorkspaceMap execution_map;
  std::unique_ptr<BoxIndex> index;
  std::unique_ptr<Roadmap> roadmap;
  std::unique_ptr<TreePath> tree;
  DynamicsSpec dynamics;
  StateEncoder encoder;
  ActionSet actions;

  EnvBundle bundle() const {
    EnvBundle env;
    env.map = &execution_map;
    env.index = index.get();
    env.roadmap = roadmap.get();
    env.tree = tree.get();
    env.dynamics = dynamics;
    env.encoder = encoder;
    env.params = config.reward;
    env.actions = actions;
    env.filter_clearance = config.evaluation.filter_clearance;
    return env;
  }
};

inline WorkspaceMap build_environment(const EnvironmentSpec& e, std::uint64_t seed) {
  if (e.type == "maze2d")
    return generate_maze_2d(e.cells_x, e.cells_y, e.loop_fraction, e.wall_thickness,
                            e.corridor_width, seed);
  if (e.type == "roomgrid3d")
    return generate_room_grid_3d(e.floors, e.rooms_per_side, e.room_size, seed,
                                 e.wall_thickness, e.door_width);
  throw std::invalid_argument("unknown environment type: " + e.type);
}

inline Vec3 sample_start(const WorkspaceMap& map, Rng& rng, double margin) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Box& region =
        map.start_regions[map.start_regions.size() == 1
                              ? 0
                              : static_cast<std::size_t>(rng.uniform_int(
                                    0, static_cast<int>(map.start_regions.size()) - 1))];
    Vec3 p(rng.uniform(region.lo.x + margin, region.hi.x - margin),
           rng.uniform(region.lo.y + margin, region.hi.y - margin), 0.0);
    if (map.dimension == 3)
      p.z = rng.uniform(region.lo.z + margin, region.hi.z - margin);
    if (!is_obstacle(map, p)) return p;
  }
  throw std::runtime_error("sample_start: no free start position found");
}

// Builds the full experiment; throws on planner connectivity failure with a
// remediation hint. `blocked` (if any) is applied to the execution map only.
inline Experiment setup_experiment(ExperimentConfig config,
                                   const WorkspaceMap* blocked_map = nullptr) {
  Experiment exp;
  exp.planning_map = build_environment(config.environment, config.seed);
  if (config.environment.start_region_index >= 0) {
    const Box region = exp.planning_map.start_regions.at(
        static_cast<std::size_t>(config.environment.start_region_index));
    exp.planning_map.start_regions = {region};
  }
  exp.execution_map = blocked_map ? *blocked_map : exp.planning_map;
  if (config.environment.start_region_index >= 0 && blocked_map)
    exp.execution_map.start_regions = exp.planning_map.start_regions;
  for (const Box& b : config.evaluation.inject_obstacles)
    exp.execution_map.obstacles.push_back(b);
  exp.index = std::make_unique<BoxIndex>(exp.execution_map);

  if (config.position_resolution <= 0.0)
    config.position_resolution = config.dynamics.speed * config.dynamics.dt;

  const bool needs_roadmap = config.reward.scheme == RewardScheme::kGraphGuided ||
                             config.reward.scheme == RewardScheme::kTreePath;
  if (config.dmin_bin_width <= 0.0)
    config.dmin_bin_width = config.reward.rball_radius;
  int dmin_bins = 1;
  const double dmin_width = config.dmin_bin_width;
  if (needs_roadmap) {
    exp.roadmap = std::make_unique<Roadmap>(
        build_rrg(exp.planning_map, config.planner.n_samples, config.planner.eta,
                  config.planner.near_radius, config.seed));
    if (!exp.roadmap->goal_connected)
      throw std::runtime_error(
          "planner: goal component disconnected from start regions; "
          "increase n_samples");
    // Relative (regret) bins: the axis only needs to resolve "at the
    // frontier" from a few depths of backtracking.
    dmin_bins = 8;
  }

  exp.dynamics.dt = config.dynamics.dt;
  exp.dynamics.noise_scale = config.dynamics.noise_scale;
  int heading_bins = 1;
  if (config.dynamics.model == "unicycle") {
    exp.dynamics.model = DynamicsModel::kUnicycle;
    exp.dynamics.action_lo = {0.0, -config.dynamics.omega_max};
    exp.dynamics.action_hi = {config.dynamics.speed, config.dynamics.omega_max};
    exp.actions = ActionSet::unicycle(config.dynamics.speed, config.dynamics.omega_max);
    heading_bins = 8;
  } else {
    exp.dynamics.model = DynamicsModel::kHolonomicVelocity;
    const double s = config.dynamics.speed;
    const int dim = exp.planning_map.dimension;
    exp.dynamics.action_lo.assign(dim, -s);
    exp.dynamics.action_hi.assign(dim, s);
    exp.actions = ActionSet::holonomic(s, dim);
  }
  exp.encoder = StateEncoder::for_map(exp.planning_map, config.position_resolution,
                                      dmin_width, dmin_bins, heading_bins);
  exp.encoder.relative_dmin = needs_roadmap;

  // Freeze the predefined test starts into the resolved config.
  if (config.test_starts.empty()) {
    Rng rng(derive_seed(config.seed, 0x7e57ULL));
    const double margin = exp.planning_map.wall_thickness;
    for (int i = 0; i < config.evaluation.n_test_starts; ++i)
      config.test_starts.push_back(sample_start(exp.planning_map, rng, margin));
  }

  if (config.reward.scheme == RewardScheme::kTreePath) {
    exp.tree = std::make_unique<TreePath>(extract_tree_path(
        *exp.roadmap, config.test_starts.front(), config.reward.rball_radius));
    if (exp.tree->waypoints.empty())
      throw std::runtime_error("planner: tree path extraction found no covered start");
  }

  exp.config = std::move(config);
  return exp;
}

struct RunReport {
  std::int64_t consumption = 0;  // budget sentinel when never achieved
  bool achieved = false;
  std::vector<bool> per_start_success;
  double success_rate = 0.0;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifact_paths;
};

inline bool greedy_rollout_succeeds(const Experiment& exp, QTable& q,
                                    const Vec3& start, std::uint64_t seed) {
  RolloutOptions opts;
  opts.epsilon = 0.0;
  opts.learn = false;
  opts.seed = seed;
  const EpisodeRecord rec =
      run_episode(exp.bundle(), q, exp.config.train, {start, 0.0}, opts);
  return rec.success();
}

// Greedy evaluation from every predefined test start.
inline std::vector<bool> evaluate_test_starts(const Experiment& exp, QTable& q,
                                              std::uint64_t eval_seed) {
  std::vector<bool> ok;
  ok.reserve(exp.config.test_starts.size());
  for (std::size_t i = 0; i < exp.config.test_starts.size(); ++i)
    ok.push_back(greedy_rollout_succeeds(exp, q, exp.config.test_starts[i],
                                         derive_seed(eval_seed, i)));
  return ok;
}

struct TrainOutcome {
  RunReport report;
  QTable q;
};

// Training loop with periodic greedy evaluations; consumption is the first
// global step at which every test start succeeds, or the budget sentinel.
// Training always runs the whole budget so the returned policy is the
// fully-trained one, not the first barely-passing snapshot.
inline TrainOutcome run_training(const Experiment& exp) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrainConfig& cfg = exp.config.train;
  QTable q(exp.actions.size());
  Rng start_rng(derive_seed(exp.config.seed, 0x5742ULL));
  const std::uint64_t eval_base = derive_seed(exp.config.seed, 0xe7a1ULL);

  RunReport report;
  report.consumption = cfg.total_steps;  // sentinel until achieved
  std::int64_t global_step = 0;
  std::int64_t next_eval = cfg.eval_cadence;
  std::uint64_t episode = 0;
  const double margin = exp.execution_map.wall_thickness;

  while (global_step < cfg.total_steps) {
    const Vec3 start = sample_start(exp.execution_map, start_rng, margin);
    RolloutOptions opts;
    opts.epsilon = cfg.epsilon_at(global_step);
    opts.learn = true;
    opts.seed = derive_seed(exp.config.seed, 0xec0000ULL + episode);
    ++episode;
    const EpisodeRecord rec = run_episode(exp.bundle(), q, cfg, {start, 0.0}, opts);
    global_step += static_cast<std::int64_t>(rec.steps.size());
    while (global_step >= next_eval) {
      const std::vector<bool> ok = evaluate_test_starts(
          exp, q, derive_seed(eval_base, static_cast<std::uint64_t>(next_eval)));
      report.per_start_success = ok;
      bool all = true;
      for (bool b : ok) all = all && b;
      if (all && !report.achieved) {
        report.achieved = true;
        report.consumption = next_eval;
      }
      next_eval += cfg.eval_cadence;
    }
  }
  if (report.per_start_success.empty())
    report.per_start_success =
        evaluate_test_starts(exp, q, derive_seed(eval_base, 0xfULL));
  int succ = 0;
  for (bool b : report.per_start_success) succ += b ? 1 : 0;
  report.success_rate = exp.config.test_starts.empty()
                            ? 0.0
                            : static_cast<double>(succ) /
                                  static_cast<double>(exp.config.test_starts.size());
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(report), std::move(q)};
}

struct CertificateResult {
  std::vector<double> per_start_rate;
  double aggregate = 0.0;
};

// Repeated greedy rollouts with seeded actuation noise from each test start.
inline CertificateResult success_certificate(const Experiment& exp, QTable& q,
                                             int trials) {
  CertificateResult result;
  EnvBundle env = exp.bundle();
  env.dynamics.noise_scale = exp.config.evaluation.noise_scale;
  int total_success = 0;
  int total = 0;
  for (std::size_t s = 0; s < exp.config.test_starts.size(); ++s) {
    int succ = 0;
    for (int trial = 0; trial < trials; ++trial) {
      RolloutOptions opts;
      opts.seed =
          derive_seed(derive_seed(exp.config.seed, 0xce47ULL), s * 100003 + trial);
      const EpisodeRecord rec = run_episode(
          env, q, exp.config.train, {exp.config.test_starts[s], 0.0}, opts);
      if (rec.success()) ++succ;
    }
    result.per_start_rate.push_back(static_cast<double>(succ) / trials);
    total_success += succ;
    total += trials;
  }
  result.aggregate = total > 0 ? static_cast<double>(total_success) / total : 0.0;
  return result;
}

// Discounted success score over a lattice of start cells (one greedy rollout
// each). Both score variants are supported; gamma^steps is the default.
inline std::string qmap_export(const Experiment& exp, QTable& q, double resolution,
                               double gamma) {
  const WorkspaceMap& map = exp.execution_map;
  const int nx = static_cast<int>(std::round((map.bounds.hi.x - map.bounds.lo.x) / resolution));
  const int ny = static_cast<int>(std::round((map.bounds.hi.y - map.bounds.lo.y) / resolution));
  const int nz = map.dimension == 3
                     ? static_cast<int>(std::round((map.bounds.hi.z - map.bounds.lo.z) / resolution))
                     : 1;
  const bool steps_pow_gamma = exp.config.evaluation.score_variant == "steps_pow_gamma";
  std::string out = "graphnav-qmap v1\n";
  out += "# config " + config_to_json(exp.config).dump() + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "dims %d %d %d resolution %.6f\n", nx, ny, nz,
                resolution);
  out += buf;
  for (int z = 0; z < nz; ++z) {
    for (int y = ny - 1; y >= 0; --y) {
      for (int x = 0; x < nx; ++x) {
        Vec3 p(map.bounds.lo.x + (x + 0.5) * resolution,
               map.bounds.lo.y + (y + 0.5) * resolution,
               map.dimension == 3 ? map.bounds.lo.z + (z + 0.5) * resolution : 0.0);
        double score = 0.0;
        if (!is_obstacle(map, p)) {
          RolloutOptions opts;
          opts.seed = derive_seed(exp.config.seed, 0x9a17ULL + x * 7919 + y * 104729 + z);
          const EpisodeRecord rec =
              run_episode(exp.bundle(), q, exp.config.train, {p, 0.0}, opts);
          if (rec.success()) {
            const double steps = static_cast<double>(rec.steps.size());
            score = steps_pow_gamma ? std::pow(std::max(steps, 1.0), gamma)
                                    : std::pow(gamma, steps);
          }
        }
        std::snprintf(buf, sizeof(buf), x + 1 < nx ? "%.6f " : "%.6f", score);
        out += buf;
      }
      out += "\n";
    }
    if (z + 1 < nz) out += "\n";
  }
  return out;
}

// --- Trajectory export: delimited polylines plus an SVG overlay (2D). ---

inline std::string trajectories_to_text(const Experiment& exp,
                                        const std::vector<EpisodeRecord>& records) {
  std::string s = "graphnav-trajectories v1\n";
  s += "# config " + config_to_json(exp.config).dump() + "\n";
  s += "episode start_x start_y start_z termination filter vertices\n";
  char buf[256];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EpisodeRecord& r = records[i];
    const char* term = r.termination == Termination::kGoal ? "goal"
                       : r.termination == Termination::kCollision ? "collision"
                                                                  : "step_cap";
    std::snprintf(buf, sizeof(buf), "%zu %.6f %.6f %.6f %s %s %zu\n", i,
                  r.start.state.position.x, r.start.state.position.y,
                  r.start.state.position.z, term,
                  exp.config.evaluation.filter_clearance > 0.0 ? "on" : "off",
                  r.steps.size() + 1);
    s += buf;
    auto emit = [&](const Vec3& p) {
      std::snprintf(buf, sizeof(buf), "  %.6f %.6f %.6f\n", p.x, p.y, p.z);
      s += buf;
    };
    emit(r.start.state.position);
    for (const EpisodeStep& st : r.steps) emit(st.position);
  }
  return s;
}

inline std::string trajectories_to_svg(const WorkspaceMap& map,
                                       const std::vector<EpisodeRecord>& records) {
  const double scale = 500.0 / std::max(map.bounds.hi.x - map.bounds.lo.x,
                                        map.bounds.hi.y - map.bounds.lo.y);
  const double w = (map.bounds.hi.x - map.bounds.lo.x) * scale;
  const double h = (map.bounds.hi.y - map.bounds.lo.y) * scale;
  auto sx = [&](double x) { return (x - map.bounds.lo.x) * scale; };
  auto sy = [&](double y) { return h - (y - map.bounds.lo.y) * scale; };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\">\n";
  auto rect = [&](const Box& b, const char* fill) {
    svg << "<rect x=\"" << sx(b.lo.x) << "\" y=\"" << sy(b.hi.y) << "\" width=\""
        << (b.hi.x - b.lo.x) * scale << "\" height=\"" << (b.hi.y - b.lo.y) * scale
        << "\" fill=\"" << fill << "\"/>\n";
  };
  for (const Box& b : map.obstacles) rect(b, "#555555");
  for (const Box& b : map.blocked_zones) rect(b, "#cc3333");
  rect(map.goal_region, "#ffd27f");
  for (const Box& b : map.start_regions) rect(b, "#b8e0b8");
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EpisodeRecord& r = records[i];
    svg << "<polyline fill=\"none\" stroke=\"" << colors[i % 10]
        << "\" stroke-width=\"1.5\" points=\"";
    svg << sx(r.start.state.position.x) << "," << sy(r.start.state.position.y);
    for (const EpisodeStep& st : r.steps)
      svg << " " << sx(st.position.x) << "," << sy(st.position.y);
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// --- Disturbance study: graph vs tree-path under blocked doors. ---

struct StudyCell {
  std::uint64_t seed = 0;
  RewardScheme scheme = RewardScheme::kGraphGuided;
  bool skipped = false;
  std::int64_t consumption = 0;
  bool achieved = false;
  double certificate_rate = 0.0;
};

struct StudyResult {
  std::vector<StudyCell> cells;

  double aggregate_rate(RewardScheme scheme) const {
    double sum = 0.0;
    int n = 0;
    for (const StudyCell& c : cells)
      if (c.scheme == scheme && !c.skipped) {
        sum += c.certificate_rate;
        ++n;
      }
    return n > 0 ? sum / n : 0.0;
  }
};

// Blocks n doors in the given region, deliberately including one that the
// planned path crosses (the disturbance targets the planned route, it is not
// blind). Throws when the path crosses no door in the region or when every
// sampled combination disconnects start from goal.
inline WorkspaceMap apply_blocked_doors_on_path(const WorkspaceMap& map,
                                                const TreePath& path, int n,
                                                int region, std::uint64_t seed,
                                                double check_resolution = 0.01) {
  if (n < 1) throw std::invalid_argument("apply_blocked_doors_on_path: n must be >= 1");
  std::vector<int> region_doors, crossing;
  for (std::size_t i = 0; i < map.doors.size(); ++i) {
    if (map.doors[i].region != region) continue;
    region_doors.push_back(static_cast<int>(i));
    for (std::size_t w = 0; w + 1 < path.waypoints.size(); ++w)
      if (segment_intersects_box(path.waypoints[w], path.waypoints[w + 1],
                                 map.doors[i].box)) {
        crossing.push_back(static_cast<int>(i));
        break;
      }
  }
  if (crossing.empty())
    throw std::runtime_error(
        "apply_blocked_doors_on_path: planned path crosses no door in region");
  if (static_cast<int>(region_doors.size()) < n)
    throw std::invalid_argument("apply_blocked_doors_on_path: not enough doors");

  // A door "touches a start room" when its slot abuts a start region box.
  // Combinations that blockade a start room (more than one of its doors
  // blocked) are rejected: the disturbance should invalidate the planned
  // route, not imprison the agent at its spawn.
  const auto touches_start = [&map](int door) {
    Box b = map.doors[static_cast<std::size_t>(door)].box;
    for (int a = 0; a < 3; ++a) {
      b.lo[a] -= 0.02;
      b.hi[a] += 0.02;
    }
    for (const Box& s : map.start_regions)
      if (b.overlaps_closed(s)) return true;
    return false;
  };

  Rng rng(derive_seed(seed, 0xb10cULL));
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<int> chosen = {
        crossing[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(crossing.size()) - 1))]};
    while (static_cast<int>(chosen.size()) < n) {
      const int candidate = region_doors[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(region_doors.size()) - 1))];
      bool dup = false;
      for (int c : chosen) dup = dup || c == candidate;
      if (!dup) chosen.push_back(candidate);
    }
    // Only meaningful for single-start-room setups; with many start rooms
    // no single room is load-bearing.
    if (map.start_regions.size() == 1) {
      int start_doors = 0;
      for (int c : chosen) start_doors += touches_start(c) ? 1 : 0;
      if (start_doors > 1) continue;
    }
    WorkspaceMap out = map;
    for (int c : chosen) out.blocked_zones.push_back(map.doors[static_cast<std::size_t>(c)].box);
    if (start_goal_connected(out, check_resolution)) return out;
  }
  throw std::runtime_error(
      "apply_blocked_doors_on_path: no connected blocking combination found");
}

// One (seed, scheme) cell: roadmap on the undisturbed map, training and
// certification on the blocked execution map. Deterministic per (seed,
// scheme), so cells match independent single runs.
inline StudyCell run_study_cell(ExperimentConfig config, RewardScheme scheme,
                                std::uint64_t seed, int n_blocked, int region,
                                int trials) {
  StudyCell cell;
  cell.seed = seed;
  cell.scheme = scheme;
  config.seed = seed;
  config.reward.scheme = scheme;
  try {
    std::unique_ptr<WorkspaceMap> blocked;
    if (n_blocked > 0) {
      // The planned route is scheme-independent, so both schemes in a cell
      // pair face the same disturbance.
      ExperimentConfig probe = config;
      probe.reward.scheme = RewardScheme::kTreePath;
      Experiment clean_exp = setup_experiment(std::move(probe));
      blocked = std::make_unique<WorkspaceMap>(apply_blocked_doors_on_path(
          clean_exp.planning_map, *clean_exp.tree, n_blocked, region, seed));
    }
    Experiment exp = setup_experiment(std::move(config), blocked.get());
    TrainOutcome outcome = run_training(exp);
    cell.consumption = outcome.report.consumption;
    cell.achieved = outcome.report.achieved;
    cell.certificate_rate = success_certificate(exp, outcome.q, trials).aggregate;
  } catch (const std::runtime_error&) {
    cell.skipped = true;  // blocking disconnected the goal (or planner failed)
  }
  return cell;
}

inline StudyResult disturbance_study(const ExperimentConfig& base, int n_blocked,
                                     int region, const std::vector<std::uint64_t>& seeds,
                                     int trials) {
  StudyResult result;
  for (std::uint64_t seed : seeds)
    for (RewardScheme scheme : {RewardScheme::kGraphGuided, RewardScheme::kTreePath})
      result.cells.push_back(
          run_study_cell(base, scheme, seed, n_blocked, region, trials));
  return result;
}

inline std::string study_to_text(const StudyResult& study, const ExperimentConfig& base,
                                 int n_blocked) {
  std::string s = "graphnav-study v1\n";
  s += "# config " + config_to_json(base).dump() + "\n";
  s += "# n_blocked " + std::to_string(n_blocked) + "\n";
  s += "seed scheme skipped achieved consumption certificate_rate\n";
  char buf[128];
  for (const StudyCell& c : study.cells) {
    std::snprintf(buf, sizeof(buf), "%llu %s %d %d %lld %.4f\n",
                  static_cast<unsigned long long>(c.seed),
                  scheme_name(c.scheme).c_str(), c.skipped ? 1 : 0,
                  c.achieved ? 1 : 0, static_cast<long long>(c.consumption),
                  c.certificate_rate);
    s += buf;
  }
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace graphnav

#endif  // GRAPHNAV_HARNESS_HPP_
