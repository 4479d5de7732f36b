#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "at3d/boat.hpp"
#include "at3d/bundle.hpp"
#include "at3d/bundle_estimator.hpp"
#include "at3d/camera.hpp"
#include "at3d/guidance.hpp"
#include "at3d/noise.hpp"
#include "at3d/rng.hpp"

namespace at3d {

struct LatchConfig {
  GuidanceGains gains;
  LatchThresholds thresholds;
  double tick_hz = 30.0;
  double no_pose_timeout_s = 1.0;    ///< an attempt fails after this long without a pose
  double coast_distance_mm = 300.0;  ///< past dx_max + this, hold the closing speed to contact
  double align_fraction = 0.5;       ///< coasting needs |d_y| and |psi| below this fraction of the thresholds
  double max_attempt_s = 60.0;
  double waypoint_noise_mm = 100.0;  ///< uniform per axis on the recovery waypoint
  double recovery_speed_mm_s = 250.0;
  int max_attempts = 10;

  void validate() const;
};

enum class LatchPhase { approaching, recovering, latched, failed };

enum class LatchEvent {
  none,
  latched,       ///< contact inside the thresholds
  contact_fail,  ///< contact outside the thresholds
  timeout_fail,  ///< no pose for too long, or the attempt ran out of time
  retry,         ///< recovery reached its waypoint; a new attempt begins
};

/// Approach / contact / retreat state machine for one camera boat.
///
/// Contact is judged on the true planar pose (the physical funnel meets
/// the pin); steering uses only the estimate. Without a pose the boat
/// holds still. Inside the coast zone the tags leave the field of view, so
/// the boat keeps closing straight ahead until contact.
class LatchController {
 public:
  LatchController(LatchConfig config, const BoatState& home, std::uint64_t seed, std::uint64_t stream);

  /// Advances `boat` by one tick and reports what happened during it.
  LatchEvent tick(BoatState& boat, const PlanarPose& truth, const std::optional<PlanarPose>& estimate);

  LatchPhase phase() const { return phase_; }
  int attempts() const { return attempts_; }
  bool coasting() const { return coasting_; }
  const BodyCommand& last_command() const { return last_cmd_; }
  const LatchConfig& config() const { return config_; }

 private:
  LatchEvent fail(LatchEvent why, BoatState& boat);
  LatchEvent approach(BoatState& boat, const PlanarPose& truth, const std::optional<PlanarPose>& estimate);
  LatchEvent recover(BoatState& boat);

  LatchConfig config_;
  BoatState home_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  LatchPhase phase_ = LatchPhase::approaching;
  int attempts_ = 1;
  long attempt_ticks_ = 0;
  long no_pose_ticks_ = 0;
  bool coasting_ = false;
  BodyCommand last_cmd_;
  Eigen::Vector2d waypoint_ = Eigen::Vector2d::Zero();
};

/// Boat state whose camera (mounted `camera_offset_mm` ahead of the boat
/// origin) sees the bundle at `planar`.
BoatState observer_for_planar(const PlanarPose& planar, const Pose6D& world_from_bundle, double camera_offset_mm = 0.0);

struct EpisodeSetup {
  BundleGeometry bundle;
  CameraIntrinsics camera;
  NoiseProfile noise;
  EstimatorConfig estimator;
  LatchConfig latch;
  PlanarPose start{1800.0, 0.0, 0.0};
  double camera_offset_mm = 0.0;
  double tag_offset_mm = 0.0;
  std::uint64_t stream = 0;  ///< episode index; keys every random draw
  long first_frame = 0;
};

struct TraceRow {
  long tick = 0;
  int attempt = 1;
  PlanarPose truth;
  bool has_estimate = false;
  PlanarPose estimate;
  BodyCommand command;
};

struct EpisodeResult {
  bool success = false;
  int attempts = 1;
  long frames = 0;
  PlanarPose final_planar;
  std::vector<TraceRow> trace;
};

/// Carrier position at time t: station keeping with a slow lateral wander of
/// amplitude `noise.target_drift_mm`.
Eigen::Vector2d carrier_position(const NoiseProfile& noise, std::uint64_t stream, double t_s);

/// Closed loop simulate -> estimate -> guide -> step at the latch tick rate,
/// until latched or out of attempts.
EpisodeResult run_episode(const EpisodeSetup& setup, bool record_trace = false);

}  // namespace at3d
