#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "at3d/bundle.hpp"
#include "at3d/bundle_estimator.hpp"
#include "at3d/camera.hpp"
#include "at3d/episode.hpp"
#include "at3d/noise.hpp"
#include "at3d/swarm.hpp"

namespace at3d {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { indoor_dock, outdoor_boats, swarm_train };
Scenario parse_scenario(std::string_view name);
std::string_view to_string(Scenario scenario);

struct ExperimentConfig {
  Scenario scenario = Scenario::indoor_dock;
  EstimatorConfig estimator;
  NoiseProfile noise;
  BundleGeometry bundle = build_bundle(130.0, 1, 10.0, 0.0);
  CameraIntrinsics camera;
  LatchConfig latch;
  int episodes = 100;
  int frames_per_episode = 100;  ///< static measurement frames before each latching run
  std::uint64_t seed = 1;

  PlanarPose start{1800.0, 0.0, 0.0};
  PlanarPose start_jitter{200.0, 100.0, 5.0};  ///< uniform half-widths per episode

  int swarm_robots = 3;
  double swarm_spacing_mm = 1000.0;
  long swarm_max_ticks = 6000;
  long swarm_command_tick = 0;
  TagCodebook codebook = TagCodebook::standard();

  /// Throws ConfigError.
  void validate() const;
};

/// Latch defaults for a scenario: indoor docks at the tag face, boats and
/// swarm robots carry the tags 500 mm inside the hull.
LatchConfig default_latch(Scenario scenario);

/// Camera start pose of an episode: `start` plus seeded uniform jitter.
PlanarPose episode_start(const ExperimentConfig& config, int episode);

struct EpisodeRow {
  int episode = 0;
  PlanarPose start;
  double detection_pct = 0.0;
  long yaw_samples = 0;
  double yaw_rmse_deg = 0.0;
  double yaw_max_abs_deg = 0.0;
  bool success = false;
  int attempts = 0;
  long ticks = 0;
  std::string error;  ///< non-empty when the episode threw
};

struct Report {
  std::string scenario;
  std::string estimator;
  std::string profile;
  std::uint64_t seed = 0;
  int episodes = 0;
  long frames = 0;
  double detection_pct = 0.0;
  double yaw_rmse_deg = 0.0;
  double yaw_max_abs_deg = 0.0;
  double success_rate = 0.0;  ///< %
  double mean_attempts = 0.0;
  std::vector<EpisodeRow> rows;
};

struct RunOptions {
  int workers = 1;
  bool traces = false;
};

struct RunOutput {
  Report report;
  std::vector<std::vector<TraceRow>> traces;  ///< per episode, when requested
};

/// Runs every episode (fanned out over `workers` threads; the result does
/// not depend on the worker count). Per-episode failures are recorded in
/// the rows and never abort the batch.
RunOutput run(const ExperimentConfig& config, const RunOptions& options = {});

struct DeltaRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  ///< b - a
};

/// Throws std::invalid_argument when the scenarios differ.
std::vector<DeltaRow> compare(const Report& a, const Report& b);

std::string format_table(const std::vector<Report>& reports);
std::string format_comparison(const Report& a, const Report& b, const std::vector<DeltaRow>& rows);

}  // namespace at3d
