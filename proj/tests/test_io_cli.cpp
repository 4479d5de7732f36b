#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "at3d/experiment.hpp"
#include "at3d/io.hpp"

using namespace at3d;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = AT3D_SOURCE_DIR;

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::path(::testing::TempDir()) / ("at3d_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args)
{
  const std::string cmd = std::string(AT3D_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Json, PoseRoundTrip)
{
  const Pose6D p(Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d(1, 2, 3).normalized())),
                 Eigen::Vector3d(1.5, -2.0, 1800.0));
  const Pose6D q = pose_from_json(to_json(p));
  EXPECT_LT(pose_error(p, q).rotation_rad, 1e-12);
  EXPECT_LT(pose_error(p, q).translation_mm, 1e-12);
  EXPECT_THROW(pose_from_json(Json{{"t", {0, 0}}, {"q", {1, 0, 0, 0}}}), ConfigError);
}

TEST(Json, BundleRoundTripAndBuildForm)
{
  const BundleGeometry b = build_bundle(130.0, 2, 10.0, 40.0, 3);
  const BundleGeometry c = bundle_from_json(to_json(b));
  ASSERT_EQ(c.placements.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(c.placements[i].tag_id, b.placements[i].tag_id);
    EXPECT_EQ(c.placements[i].role, b.placements[i].role);
    EXPECT_LT(pose_error(c.placements[i].tag_to_bundle, b.placements[i].tag_to_bundle).translation_mm, 1e-9);
  }
  const BundleGeometry shipped = bundle_from_json(read_json_file(kSource / "configs/bundles/two_tag_10deg.json"));
  EXPECT_EQ(shipped.placements.size(), 2u);
  EXPECT_THROW(bundle_from_json(Json{{"build", {{"side_mm", -1.0}}}}), ConfigError);
}

TEST(Json, ProfileAndCameraRoundTrip)
{
  for (const char* name : {"zero", "indoor", "outdoor"}) {
    const NoiseProfile np = profile_from_json(read_json_file(kSource / "configs/profiles" / (std::string(name) + ".json")));
    const NoiseProfile back = profile_from_json(to_json(np));
    EXPECT_EQ(to_json(back).dump(), to_json(np).dump()) << name;
  }
  EXPECT_THROW(profile_from_json(Json{{"pixel_sigma", -1.0}}), ConfigError);
  EXPECT_THROW(profile_from_json(Json{{"pixel_sigmaa", 1.0}}), ConfigError);
  CameraIntrinsics k;
  k.fx = 700.0;
  EXPECT_EQ(camera_from_json(to_json(k)).fx, 700.0);
}

TEST(Json, ReportRoundTrip)
{
  ExperimentConfig c = load_experiment(kSource / "configs/experiments/indoor_bundle3d.json");
  c.episodes = 3;
  c.frames_per_episode = 20;
  const Report r = run(c).report;
  EXPECT_EQ(to_json(report_from_json(to_json(r))).dump(), to_json(r).dump());
}

TEST(Json, DetectionsJsonlRoundTrip)
{
  Detection d;
  d.tag_id = 4;
  d.frame_index = 12;
  for (int i = 0; i < 4; ++i) d.corners[i] = Eigen::Vector2d(100.25 + i, 200.5 - i);
  std::stringstream ss;
  write_detections_jsonl(ss, 12, {d});
  write_detections_jsonl(ss, 13, {});
  const auto frames = read_detections_jsonl(ss);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].first, 12);
  ASSERT_EQ(frames[0].second.size(), 1u);
  EXPECT_EQ(frames[0].second[0].tag_id, 4);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(frames[0].second[0].corners[i], d.corners[i]);
  EXPECT_TRUE(frames[1].second.empty());
}

TEST(Config, ShippedExperimentsLoad)
{
  for (const auto& entry : fs::directory_iterator(kSource / "configs/experiments"))
    EXPECT_NO_THROW(load_experiment(entry.path())) << entry.path();
}

TEST(Config, ErrorsAreConfigErrors)
{
  const fs::path dir = scratch("config_errors");
  const auto bad = [&](const std::string& text) {
    write(dir / "c.json", text);
    EXPECT_THROW(load_experiment(dir / "c.json"), ConfigError) << text;
  };
  bad(R"({"scenario": "indoor_dock"})");
  bad(R"({"scenario": "lake", "estimator": "bundle3d"})");
  bad(R"({"scenario": "indoor_dock", "estimator": "bundle4d"})");
  bad(R"({"scenario": "indoor_dock", "estimator": "bundle3d", "episodes": 0})");
  bad(R"({"scenario": "indoor_dock", "estimator": "bundle3d", "episode": 3})");
  bad(R"({"scenario": "indoor_dock", "estimator": "bundle3d", "noise_profile": "missing.json"})");
  bad(R"({"scenario": "indoor_dock", "estimator": "bundle3d", "latch": {"thresholds": "lake"}})");
  bad(R"({"scenario": "swarm_train", "estimator": "bundle3d", "swarm": {"codebook": {"0": "STAND_BY"}}})");
  bad(R"({"scenario": "swarm_train", "estimator": "bundle3d", "bundle": {"build": {"side_mm": 130, "first_tag_id": 5}}})");
  bad("{not json");
}

TEST(Compare, IdenticalReportsGiveZeroDeltas)
{
  ExperimentConfig c = load_experiment(kSource / "configs/experiments/outdoor_classic.json");
  c.episodes = 4;
  const Report r = run(c).report;
  const auto rows = compare(r, r);
  EXPECT_FALSE(rows.empty());
  for (const auto& row : rows) EXPECT_EQ(row.delta, 0.0) << row.metric;

  Report other = r;
  other.scenario = "indoor_dock";
  EXPECT_THROW(compare(r, other), std::invalid_argument);
}

TEST(Compare, BundleDetectionAtLeastClassicForEverySeed)
{
  for (const char* env : {"indoor", "outdoor"}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      ExperimentConfig a = load_experiment(kSource / "configs/experiments" / (std::string(env) + "_classic.json"));
      ExperimentConfig b = load_experiment(kSource / "configs/experiments" / (std::string(env) + "_bundle3d.json"));
      for (auto* c : {&a, &b}) {
        c->seed = seed;
        c->episodes = 5;
        c->frames_per_episode = 60;
      }
      const Report ra = run(a).report;
      const Report rb = run(b).report;
      EXPECT_GE(rb.detection_pct, ra.detection_pct) << env << " " << seed;
      for (std::size_t i = 0; i < ra.rows.size(); ++i) EXPECT_GE(rb.rows[i].detection_pct, ra.rows[i].detection_pct);
    }
  }
}

TEST(Run, ZeroNoiseIsPerfect)
{
  const Report r = run(load_experiment(kSource / "configs/experiments/zero_noise.json")).report;
  EXPECT_EQ(r.detection_pct, 100.0);
  EXPECT_LT(r.yaw_rmse_deg, 1e-6);
  EXPECT_EQ(r.success_rate, 100.0);
  EXPECT_EQ(r.mean_attempts, 1.0);
}

TEST(Cli, ConfigErrorsExitWithTwo)
{
  const fs::path dir = scratch("cli_errors");
  write(dir / "bad.json", R"({"scenario": "lake", "estimator": "bundle3d"})");
  EXPECT_EQ(cli("run --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(cli("run --config " + (dir / "missing.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(cli("run --out " + (dir / "o").string()), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("run --config " + (kSource / "configs/experiments/zero_noise.json").string() + " --out " +
                (dir / "o").string() + " --episodes 0"),
            2);
}

TEST(Cli, RunWritesReportsAndCompareSucceeds)
{
  const fs::path dir = scratch("cli_run");
  const std::string cfg = (kSource / "configs/experiments/indoor_classic.json").string();
  ASSERT_EQ(cli("run --config " + cfg + " --out " + (dir / "a").string() + " --episodes 3 --traces"), 0);
  for (const char* f : {"report.json", "report.txt", "episodes.csv", "traces/episode_0000.csv"})
    EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  const Report r = report_from_json(read_json_file(dir / "a/report.json"));
  EXPECT_EQ(r.episodes, 3);
  const std::string rep = (dir / "a/report.json").string();
  EXPECT_EQ(cli("compare " + rep + " " + rep), 0);
}

TEST(Cli, SimulateThenReplayMatchesInProcessEstimates)
{
  const fs::path dir = scratch("cli_replay");
  const std::string cfg = (kSource / "configs/experiments/outdoor_bundle3d.json").string();
  ASSERT_EQ(cli("simulate --config " + cfg + " --frames 40 --out " + (dir / "d.jsonl").string()), 0);
  ASSERT_EQ(cli("replay --config " + cfg + " --detections " + (dir / "d.jsonl").string() + " --out " +
                (dir / "e.csv").string()),
            0);
  std::istringstream csv(slurp(dir / "e.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "frame,n_tags,d_x_mm,d_y_mm,psi_deg,confidence,ambiguous_flag");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 40);
  EXPECT_EQ(cli("replay --detections " + (dir / "nope.jsonl").string()), 2);
}

TEST(Cli, SwarmEmitsEventLog)
{
  const fs::path dir = scratch("cli_swarm");
  const std::string cfg = (kSource / "configs/experiments/swarm_zero_noise.json").string();
  ASSERT_EQ(cli("swarm --config " + cfg + " --out " + (dir / "ev.jsonl").string()), 0);
  std::istringstream in(slurp(dir / "ev.jsonl"));
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  const Json first = Json::parse(line);
  EXPECT_EQ(first.at("event"), "TAG_CHANGED");
  EXPECT_EQ(first.at("robot"), 1);
}
