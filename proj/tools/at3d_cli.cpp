#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "at3d/experiment.hpp"
#include "at3d/io.hpp"
#include "at3d/scene.hpp"
#include "at3d/simulator.hpp"
#include "at3d/swarm.hpp"

namespace fs = std::filesystem;
using namespace at3d;

namespace {

constexpr int kConfigError = 2;

void write_file(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::optional<int> episodes, int workers, bool traces)
{
  ExperimentConfig cfg = load_experiment(config_path);
  if (seed) cfg.seed = *seed;
  if (episodes) cfg.episodes = *episodes;
  cfg.validate();

  RunOptions opt;
  opt.workers = workers;
  opt.traces = traces;
  const RunOutput out = run(cfg, opt);

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "report.json", to_json(out.report).dump(2) + "\n");
  const std::string table = format_table({out.report});
  write_file(fs::path(out_dir) / "report.txt", table);
  std::ostringstream rows;
  write_episode_csv(rows, out.report);
  write_file(fs::path(out_dir) / "episodes.csv", rows.str());
  if (traces) {
    const fs::path dir = fs::path(out_dir) / "traces";
    fs::create_directories(dir);
    for (std::size_t i = 0; i < out.traces.size(); ++i) {
      std::ostringstream csv;
      write_trace_csv(csv, out.traces[i]);
      char name[32];
      std::snprintf(name, sizeof name, "episode_%04zu.csv", i);
      write_file(dir / name, csv.str());
    }
  }
  std::cout << table;
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path)
{
  const Report a = report_from_json(read_json_file(a_path));
  const Report b = report_from_json(read_json_file(b_path));
  std::vector<DeltaRow> rows;
  try {
    rows = compare(a, b);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::cout << format_comparison(a, b, rows);
  return 0;
}

int cmd_replay(const std::string& detections_path, const std::string& config_path, const std::string& bundle_path,
               const std::string& estimator, const std::string& out_path)
{
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_experiment(config_path);
  if (!bundle_path.empty()) cfg.bundle = bundle_from_json(read_json_file(bundle_path));
  if (!estimator.empty()) {
    try {
      cfg.estimator.kind = parse_estimator_kind(estimator);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  std::ifstream in(detections_path);
  if (!in) throw ConfigError("cannot open " + detections_path);
  const auto frames = read_detections_jsonl(in);

  std::ostringstream csv;
  write_estimate_csv_header(csv);
  PoseEstimator est(cfg.estimator);
  for (const auto& [frame, dets] : frames) write_estimate_csv_row(csv, frame, est.update(dets, cfg.bundle, cfg.camera));
  if (out_path.empty()) std::cout << csv.str();
  else write_file(out_path, csv.str());
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, int episode, std::optional<int> frames)
{
  ExperimentConfig cfg = load_experiment(config_path);
  if (frames) cfg.frames_per_episode = *frames;
  cfg.validate();
  NoiseProfile np = cfg.noise;
  np.seed = cfg.seed;
  const PlanarPose start = cfg.scenario == Scenario::swarm_train ? PlanarPose{cfg.swarm_spacing_mm, 0.0, 0.0}
                                                                 : episode_start(cfg, episode);
  const Pose6D nominal = camera_from_planar(start);
  std::ostringstream os;
  for (long f = 0; f < cfg.frames_per_episode; ++f) {
    const SimFrame sim = simulate_frame(nominal, cfg.bundle, cfg.camera, np, f, static_cast<std::uint64_t>(episode));
    write_detections_jsonl(os, f, sim.detections);
  }
  if (out_path.empty()) std::cout << os.str();
  else write_file(out_path, os.str());
  return 0;
}

int cmd_swarm(const std::string& config_path, const std::string& out_path, std::optional<std::uint64_t> seed)
{
  ExperimentConfig cfg = load_experiment(config_path);
  if (seed) cfg.seed = *seed;
  ScenarioOptions opt;
  opt.robots = cfg.swarm_robots;
  opt.spacing_mm = cfg.swarm_spacing_mm;
  opt.bundle = cfg.bundle;
  opt.camera = cfg.camera;
  opt.noise = cfg.noise;
  opt.noise.seed = cfg.seed;
  opt.estimator = cfg.estimator;
  opt.latch = cfg.latch;
  opt.codebook = cfg.codebook;
  opt.command_tick = cfg.swarm_command_tick;
  FormationScenario sc = make_train_link(opt);
  const auto done = run_formation(sc, cfg.swarm_max_ticks);

  std::ostringstream os;
  for (const auto& ev : sc.events) os << to_json(ev).dump() << '\n';
  if (out_path.empty()) std::cout << os.str();
  else write_file(out_path, os.str());
  std::cerr << (done ? "formation complete at tick " + std::to_string(*done) : std::string("formation incomplete"))
            << '\n';
  return done ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Multi-plane tag bundle pose estimation: simulation and experiment harness"};
  app.require_subcommand(1);

  std::string config, out, a, b, detections, bundle, estimator;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes, frames;
  int workers = 1;
  int episode = 0;
  bool traces = false;

  auto* run_cmd = app.add_subcommand("run", "run an experiment and write a report");
  run_cmd->add_option("--config", config, "experiment JSON")->required();
  run_cmd->add_option("--out", out, "output directory")->required();
  run_cmd->add_option("--seed", seed, "override the config seed");
  run_cmd->add_option("--episodes", episodes, "override the episode count");
  run_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--traces", traces, "write per-episode trace CSVs");

  auto* cmp_cmd = app.add_subcommand("compare", "side-by-side deltas of two reports");
  cmp_cmd->add_option("report_a", a, "report.json")->required();
  cmp_cmd->add_option("report_b", b, "report.json")->required();

  auto* rep_cmd = app.add_subcommand("replay", "re-run pose estimation on a detection stream");
  rep_cmd->add_option("--detections", detections, "JSON-lines detections")->required();
  rep_cmd->add_option("--config", config, "experiment JSON supplying bundle, camera and estimator");
  rep_cmd->add_option("--bundle", bundle, "bundle JSON");
  rep_cmd->add_option("--estimator", estimator, "classic_single or bundle3d");
  rep_cmd->add_option("--out", out, "CSV path (default stdout)");

  auto* sim_cmd = app.add_subcommand("simulate", "dump one episode's measurement frames as JSON lines");
  sim_cmd->add_option("--config", config, "experiment JSON")->required();
  sim_cmd->add_option("--out", out, "JSONL path (default stdout)");
  sim_cmd->add_option("--episode", episode, "episode index")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--frames", frames, "frame count");

  auto* swarm_cmd = app.add_subcommand("swarm", "run one formation and print its event log");
  swarm_cmd->add_option("--config", config, "experiment JSON")->required();
  swarm_cmd->add_option("--out", out, "JSONL path (default stdout)");
  swarm_cmd->add_option("--seed", seed, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(config, out, seed, episodes, workers, traces);
    if (*cmp_cmd) return cmd_compare(a, b);
    if (*rep_cmd) return cmd_replay(detections, config, bundle, estimator, out);
    if (*sim_cmd) return cmd_simulate(config, out, episode, frames);
    if (*swarm_cmd) return cmd_swarm(config, out, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
