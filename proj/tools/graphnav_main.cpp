// Command-line front end: environment generation, roadmap planning, tabular
// Q-learning with graph-guided rewards, evaluation, and the blocked-door
// robustness study. All artifacts are versioned text files.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphnav/harness.hpp"

namespace {

// Exit codes: 0 ok, 2 config, 3 planning, 4 io, 5 invariant.
constexpr int kConfigError = 2;
constexpr int kPlanningError = 3;
constexpr int kIoError = 4;
constexpr int kInvariantError = 5;

using namespace graphnav;

ExperimentConfig load_config(const std::string& path, std::uint64_t seed,
                             const std::string& scheme) {
  ExperimentConfig config;
  if (!path.empty()) config = config_from_json(json::parse(read_file(path)));
  if (seed != static_cast<std::uint64_t>(-1)) config.seed = seed;
  if (!scheme.empty()) config.reward.scheme = parse_scheme(scheme);
  config.reward.validate();
  return config;
}

std::string join(const std::string& dir, const std::string& name) {
  return dir.empty() || dir == "." ? name : dir + "/" + name;
}

int cmd_gen_map(const std::string& config_path, std::uint64_t seed,
                const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path, seed, "");
  const WorkspaceMap map = build_environment(config.environment, config.seed);
  const std::string path = join(out_dir, "map.txt");
  write_file(path, serialize_map(map));
  std::cout << "wrote " << path << " (" << map.obstacles.size() << " obstacles, "
            << map.doors.size() << " doors)\n";
  return 0;
}

int cmd_plan(const std::string& config_path, std::uint64_t seed,
             const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path, seed, "");
  const WorkspaceMap map = build_environment(config.environment, config.seed);
  const Roadmap roadmap = build_rrg(map, config.planner.n_samples, config.planner.eta,
                                    config.planner.near_radius, config.seed);
  if (!roadmap.goal_connected) {
    std::cerr << "planning_error: goal component disconnected from start "
                 "regions; increase n_samples\n";
    return kPlanningError;
  }
  const std::string path = join(out_dir, "roadmap.txt");
  write_file(path, serialize_roadmap(roadmap));
  std::cout << "wrote " << path << " (" << roadmap.nodes.size() << " nodes)\n";
  return 0;
}

int cmd_train(const std::string& config_path, std::uint64_t seed,
              const std::string& scheme, const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path, seed, scheme);
  const Experiment exp = setup_experiment(config);
  TrainOutcome outcome = run_training(exp);
  const std::string qpath = join(out_dir, "qtable.txt");
  write_file(qpath, outcome.q.serialize());
  json report;
  report["config"] = config_to_json(exp.config);
  report["consumption"] = outcome.report.consumption;
  report["achieved"] = outcome.report.achieved;
  report["success_rate"] = outcome.report.success_rate;
  report["wall_clock_seconds"] = outcome.report.wall_clock_seconds;
  report["per_start_success"] = outcome.report.per_start_success;
  report["artifacts"] = json::array({qpath});
  const std::string rpath = join(out_dir, "train_report.json");
  write_file(rpath, report.dump(2) + "\n");
  std::cout << "consumption " << outcome.report.consumption
            << (outcome.report.achieved ? "" : " (budget exhausted)")
            << ", final success rate " << outcome.report.success_rate << "\n"
            << "wrote " << qpath << " and " << rpath << "\n";
  return 0;
}

int cmd_evaluate(const std::string& config_path, std::uint64_t seed,
                 const std::string& scheme, const std::string& qtable_path,
                 const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path, seed, scheme);
  const Experiment exp = setup_experiment(config);
  QTable q = QTable::deserialize(read_file(qtable_path));
  if (q.n_actions() != exp.actions.size()) {
    std::cerr << "invariant_error: checkpoint action count " << q.n_actions()
              << " does not match configured action set " << exp.actions.size()
              << "\n";
    return kInvariantError;
  }
  const CertificateResult cert =
      success_certificate(exp, q, exp.config.evaluation.trials);
  json report;
  report["config"] = config_to_json(exp.config);
  report["trials_per_start"] = exp.config.evaluation.trials;
  report["per_start_rate"] = cert.per_start_rate;
  report["aggregate_rate"] = cert.aggregate;
  const std::string path = join(out_dir, "certificate.json");
  write_file(path, report.dump(2) + "\n");
  std::cout << "aggregate success rate " << cert.aggregate << "\nwrote " << path
            << "\n";
  return 0;
}

int cmd_qmap(const std::string& config_path, std::uint64_t seed,
             const std::string& scheme, const std::string& qtable_path,
             double resolution, const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path, seed, scheme);
  const Experiment exp = setup_experiment(config);
  QTable q = QTable::deserialize(read_file(qtable_path));
  if (resolution <= 0.0) resolution = exp.config.position_resolution;
  const std::string path = join(out_dir, "qmap.txt");
  write_file(path, qmap_export(exp, q, resolution, exp.config.train.gamma));
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_export(const std::string& config_path, std::uint64_t seed,
               const std::string& scheme, const std::string& qtable_path,
               const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path, seed, scheme);
  const Experiment exp = setup_experiment(config);
  QTable q = QTable::deserialize(read_file(qtable_path));
  std::vector<EpisodeRecord> records;
  for (std::size_t i = 0; i < exp.config.test_starts.size(); ++i) {
    RolloutOptions opts;
    opts.seed = derive_seed(exp.config.seed, 0x44aaULL + i);
    records.push_back(run_episode(exp.bundle(), q, exp.config.train,
                                  {exp.config.test_starts[i], 0.0}, opts));
  }
  const std::string tpath = join(out_dir, "trajectories.txt");
  write_file(tpath, trajectories_to_text(exp, records));
  std::string spath;
  if (exp.execution_map.dimension == 2) {
    spath = join(out_dir, "trajectories.svg");
    write_file(spath, trajectories_to_svg(exp.execution_map, records));
  }
  std::cout << "wrote " << tpath;
  if (!spath.empty()) std::cout << " and " << spath;
  std::cout << "\n";
  return 0;
}

int cmd_study(const std::string& config_path, std::uint64_t seed, int n_blocked,
              int region, int n_seeds, int trials, const std::string& out_dir) {
  ExperimentConfig config = load_config(config_path, seed, "");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_seeds; ++i) seeds.push_back(config.seed + i);
  const StudyResult study =
      disturbance_study(config, n_blocked, region, seeds, trials);
  const std::string path = join(out_dir, "study.txt");
  write_file(path, study_to_text(study, config, n_blocked));
  std::cout << "graph aggregate rate "
            << study.aggregate_rate(RewardScheme::kGraphGuided)
            << ", tree aggregate rate "
            << study.aggregate_rate(RewardScheme::kTreePath) << "\nwrote " << path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphnav: motion-planning-guided reinforcement learning toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", scheme, qtable_path;
  std::uint64_t seed = static_cast<std::uint64_t>(-1);
  double resolution = 0.0;
  int n_blocked = 0, region = 0, n_seeds = 5, trials = 200;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--seed", seed, "override config seed");
    sub->add_option("--out-dir", out_dir, "output directory (must exist)");
  };
  auto add_scheme = [&](CLI::App* sub) {
    sub->add_option("--scheme", scheme,
                    "reward scheme: graph | tree | sparse | euclid");
  };
  auto add_qtable = [&](CLI::App* sub) {
    sub->add_option("--qtable", qtable_path, "trained checkpoint")->required();
  };

  CLI::App* gen = app.add_subcommand("gen-map", "generate a workspace map");
  add_common(gen);
  CLI::App* plan = app.add_subcommand("plan", "build roadmap and cost-to-go");
  add_common(plan);
  CLI::App* train = app.add_subcommand("train", "train a tabular policy");
  add_common(train);
  add_scheme(train);
  CLI::App* eval = app.add_subcommand("evaluate", "success certificate");
  add_common(eval);
  add_scheme(eval);
  add_qtable(eval);
  CLI::App* qmap = app.add_subcommand("qmap", "discounted success score map");
  add_common(qmap);
  add_scheme(qmap);
  add_qtable(qmap);
  qmap->add_option("--resolution", resolution, "score lattice pitch");
  CLI::App* exp = app.add_subcommand("export", "greedy trajectories + SVG");
  add_common(exp);
  add_scheme(exp);
  add_qtable(exp);
  CLI::App* study = app.add_subcommand("study", "blocked-door robustness study");
  add_common(study);
  study->add_option("--blocked", n_blocked, "doors to block per seed");
  study->add_option("--region", region, "door region (floor) to block in");
  study->add_option("--seeds", n_seeds, "number of study seeds");
  study->add_option("--trials", trials, "certificate trials per start");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_map(config_path, seed, out_dir);
    if (plan->parsed()) return cmd_plan(config_path, seed, out_dir);
    if (train->parsed()) return cmd_train(config_path, seed, scheme, out_dir);
    if (eval->parsed())
      return cmd_evaluate(config_path, seed, scheme, qtable_path, out_dir);
    if (qmap->parsed())
      return cmd_qmap(config_path, seed, scheme, qtable_path, resolution, out_dir);
    if (exp->parsed())
      return cmd_export(config_path, seed, scheme, qtable_path, out_dir);
    if (study->parsed())
      return cmd_study(config_path, seed, n_blocked, region, n_seeds, trials,
                       out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config_error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    std::cerr << "config_error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    if (what.rfind("planner:", 0) == 0) {
      std::cerr << "planning_error: " << what << "\n";
      return kPlanningError;
    }
    if (what.find("cannot open") != std::string::npos) {
      std::cerr << "io_error: " << what << "\n";
      return kIoError;
    }
    std::cerr << "invariant_error: " << what << "\n";
    return kInvariantError;
  }
  return 0;
}
