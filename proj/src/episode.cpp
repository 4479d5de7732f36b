#include "at3d/episode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "at3d/scene.hpp"
#include "at3d/simulator.hpp"

namespace at3d {
namespace {

constexpr std::uint64_t kWaypointStream = 0x57415950;  // "WAYP"
constexpr std::uint64_t kDriftStream = 0x44524946;     // "DRIF"
constexpr double kArrivalMm = 5.0;
constexpr double kArrivalDeg = 0.5;

}  // namespace

void LatchConfig::validate() const
{
  thresholds.validate();
  if (!(tick_hz > 0.0) || !(no_pose_timeout_s > 0.0) || !(max_attempt_s > 0.0) || !(recovery_speed_mm_s > 0.0))
    throw std::invalid_argument("latch timing parameters must be positive");
  if (coast_distance_mm < 0.0 || waypoint_noise_mm < 0.0)
    throw std::invalid_argument("coast distance and waypoint noise must be non-negative");
  if (!(align_fraction > 0.0 && align_fraction <= 1.0)) throw std::invalid_argument("align_fraction must lie in (0, 1]");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be at least 1");
}

LatchController::LatchController(LatchConfig config, const BoatState& home, std::uint64_t seed, std::uint64_t stream)
    : config_(config), home_(home), seed_(seed), stream_(stream)
{
  config_.validate();
}

LatchEvent LatchController::tick(BoatState& boat, const PlanarPose& truth, const std::optional<PlanarPose>& estimate)
{
  switch (phase_) {
    case LatchPhase::approaching:
      return approach(boat, truth, estimate);
    case LatchPhase::recovering:
      return recover(boat);
    case LatchPhase::latched:
    case LatchPhase::failed:
      boat.velocity = {};
      return LatchEvent::none;
  }
  return LatchEvent::none;
}

LatchEvent LatchController::fail(LatchEvent why, BoatState& boat)
{
  boat.velocity = {};
  last_cmd_ = {};
  if (attempts_ >= config_.max_attempts) {
    phase_ = LatchPhase::failed;
    return why;
  }
  Rng rng = Rng::stream(seed_, {kWaypointStream, stream_, static_cast<std::uint64_t>(attempts_)});
  const double nx = rng.uniform(-config_.waypoint_noise_mm, config_.waypoint_noise_mm);
  const double ny = rng.uniform(-config_.waypoint_noise_mm, config_.waypoint_noise_mm);
  waypoint_ = home_.position + Eigen::Vector2d(nx, ny);
  phase_ = LatchPhase::recovering;
  return why;
}

LatchEvent LatchController::approach(BoatState& boat, const PlanarPose& truth,
                                     const std::optional<PlanarPose>& estimate)
{
  const double dt = 1.0 / config_.tick_hz;
  if (truth.d_x < config_.thresholds.dx_max_mm) {
    if (check_latch(truth, config_.thresholds)) {
      phase_ = LatchPhase::latched;
      boat.velocity = {};
      return LatchEvent::latched;
    }
    return fail(LatchEvent::contact_fail, boat);
  }
  ++attempt_ticks_;
  if (static_cast<double>(attempt_ticks_) * dt > config_.max_attempt_s) return fail(LatchEvent::timeout_fail, boat);

  const BodyCommand coast{std::max(last_cmd_.surge_mm_s, config_.gains.min_closing_mm_s), 0.0, 0.0};
  BodyCommand cmd;
  if (estimate) {
    no_pose_ticks_ = 0;
    const double gate = config_.thresholds.dx_max_mm + config_.coast_distance_mm;
    const bool aligned = std::abs(estimate->d_y) < config_.align_fraction * config_.thresholds.dy_max_mm &&
                         std::abs(estimate->psi) < config_.align_fraction * config_.thresholds.yaw_max_deg;
    if (estimate->d_x < gate && aligned) coasting_ = true;
    if (coasting_) {
      cmd = coast;
    } else {
      // Misaligned boats wait at the coast gate while sway and yaw settle.
      GuidanceGains g = config_.gains;
      if (!aligned) g.dx_standoff_mm = std::max(g.dx_standoff_mm, gate);
      cmd = guidance(*estimate, g);
    }
  } else {
    ++no_pose_ticks_;
    if (!coasting_ && static_cast<double>(no_pose_ticks_) * dt > config_.no_pose_timeout_s)
      return fail(LatchEvent::timeout_fail, boat);
    if (coasting_) cmd = coast;
  }
  last_cmd_ = cmd;
  boat = step_boat(boat, cmd, dt, config_.gains.limits);
  return LatchEvent::none;
}

LatchEvent LatchController::recover(BoatState& boat)
{
  const double dt = 1.0 / config_.tick_hz;
  const Eigen::Vector2d delta = waypoint_ - boat.position;
  const double heading_err = wrap_deg(home_.heading_deg - boat.heading_deg);
  if (delta.norm() < kArrivalMm && std::abs(heading_err) < kArrivalDeg) {
    boat.velocity = {};
    phase_ = LatchPhase::approaching;
    ++attempts_;
    attempt_ticks_ = 0;
    no_pose_ticks_ = 0;
    coasting_ = false;
    last_cmd_ = {};
    return LatchEvent::retry;
  }
  // Straight line to the waypoint: world velocity capped so the step never
  // overshoots, expressed in body axes.
  const double speed = std::min(config_.recovery_speed_mm_s, delta.norm() / dt);
  const Eigen::Vector2d v_world = delta.norm() > 0.0 ? Eigen::Vector2d(delta.normalized() * speed) : Eigen::Vector2d::Zero();
  const double h = deg2rad(boat.heading_deg);
  const double yaw_rate = std::clamp(heading_err / dt, -config_.gains.limits.max_yaw_rate_deg_s,
                                     config_.gains.limits.max_yaw_rate_deg_s);
  BoatLimits limits = config_.gains.limits;
  limits.max_surge_mm_s = std::max(limits.max_surge_mm_s, config_.recovery_speed_mm_s);
  limits.max_sway_mm_s = std::max(limits.max_sway_mm_s, config_.recovery_speed_mm_s);
  // The rotation during the step is small; integrate translation in world
  // axes directly so the path stays a straight line.
  BodyCommand cmd{std::cos(h) * v_world.x() + std::sin(h) * v_world.y(),
                  -std::sin(h) * v_world.x() + std::cos(h) * v_world.y(), yaw_rate};
  cmd = saturate(cmd, limits);
  boat.position += dt * v_world;
  boat.heading_deg = wrap_deg(boat.heading_deg + cmd.yaw_rate_deg_s * dt);
  boat.velocity = cmd;
  return LatchEvent::none;
}

BoatState observer_for_planar(const PlanarPose& planar, const Pose6D& world_from_bundle, double camera_offset_mm)
{
  const Pose6D world_from_cam = world_from_bundle * camera_from_planar(planar).inverse();
  const Eigen::Matrix3d r = world_from_cam.rotation_matrix();
  BoatState s;
  s.heading_deg = rad2deg(std::atan2(r(1, 2), r(0, 2)));
  const double h = deg2rad(s.heading_deg);
  s.position = world_from_cam.translation().head<2>() - camera_offset_mm * Eigen::Vector2d(std::cos(h), std::sin(h));
  return s;
}

Eigen::Vector2d carrier_position(const NoiseProfile& noise, std::uint64_t stream, double t_s)
{
  if (noise.target_drift_mm == 0.0) return Eigen::Vector2d::Zero();
  Rng rng = Rng::stream(noise.seed, {kDriftStream, stream});
  const double phase = 2.0 * kPi * rng.uniform();
  return {0.0, noise.target_drift_mm * std::sin(2.0 * kPi * t_s / noise.target_drift_period_s + phase)};
}

EpisodeResult run_episode(const EpisodeSetup& setup, bool record_trace)
{
  setup.bundle.validate();
  setup.camera.validate();
  setup.noise.validate();
  auto frame_time = [&](long frame) { return static_cast<double>(frame) / setup.noise.frame_rate_hz; };

  auto bundle_pose = [&](long frame) {
    return world_from_bundle(carrier_position(setup.noise, setup.stream, frame_time(frame)), 0.0, setup.tag_offset_mm);
  };
  BoatState boat = observer_for_planar(setup.start, bundle_pose(setup.first_frame), setup.camera_offset_mm);
  LatchController controller(setup.latch, boat, setup.noise.seed, setup.stream);
  PoseEstimator estimator(setup.estimator);

  EpisodeResult result;
  const long max_ticks = static_cast<long>(std::ceil(
      setup.latch.max_attempts * (setup.latch.max_attempt_s + 120.0) * setup.latch.tick_hz));
  long frame = setup.first_frame;
  for (long tick = 0; tick < max_ticks; ++tick, ++frame) {
    const Pose6D nominal =
        world_from_camera(boat.position, boat.heading_deg, setup.camera_offset_mm).inverse() * bundle_pose(frame);
    const PlanarPose truth = to_planar(nominal);

    std::optional<PlanarPose> est;
    if (controller.phase() == LatchPhase::approaching && nominal.translation().z() > 0.0) {
      const SimFrame sim = simulate_frame(nominal, setup.bundle, setup.camera, setup.noise, frame, setup.stream);
      if (auto e = estimator.update(sim.detections, setup.bundle, setup.camera)) est = to_planar(e->camera_from_bundle);
    }
    const int attempt = controller.attempts();
    const LatchEvent ev = controller.tick(boat, truth, est);
    if (record_trace) result.trace.push_back({tick, attempt, truth, est.has_value(), est.value_or(PlanarPose{}),
                                              boat.velocity});
    if (ev == LatchEvent::retry) estimator.reset();
    result.frames = tick + 1;
    result.final_planar = truth;
    if (controller.phase() == LatchPhase::latched || controller.phase() == LatchPhase::failed) break;
  }
  result.success = controller.phase() == LatchPhase::latched;
  result.attempts = controller.attempts();
  return result;
}

}  // namespace at3d
