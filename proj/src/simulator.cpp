#include "at3d/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "at3d/rng.hpp"
#include "at3d/scene.hpp"

namespace at3d {
namespace {

enum StreamLabel : std::uint64_t {
  kWaveStream = 0x57415645,     // "WAVE"
  kJitterStream = 0x4a495454,   // "JITT"
  kDiskStream = 0x4449534b,     // "DISK"
  kCorruptStream = 0x434f5252,  // "CORR"
};

double mean_diagonal(const Corners2& c)
{
  return 0.5 * ((c[2] - c[0]).norm() + (c[3] - c[1]).norm());
}

bool inside_image(const Corners2& c, const CameraIntrinsics& k)
{
  return std::all_of(c.begin(), c.end(), [&](const Eigen::Vector2d& p) { return k.contains(p); });
}

}  // namespace

void NoiseProfile::validate() const
{
  if (pixel_sigma < 0.0 || reflection_rate < 0.0 || reflection_radius_frac < 0.0 || wave_amplitude_deg < 0.0 ||
      glint_lobe_deg < 0.0 || glint_radius_frac < 0.0 || target_drift_mm < 0.0)
    throw std::invalid_argument("noise rates, radii and sigmas must be non-negative");
  if (!(occlusion_kill_frac > 0.0 && occlusion_kill_frac <= 1.0))
    throw std::invalid_argument("occlusion_kill_frac must lie in (0, 1]");
  if (!(wave_period_s > 0.0) || !(frame_rate_hz > 0.0) || !(target_drift_period_s > 0.0))
    throw std::invalid_argument("periods and frame rate must be positive");
  if (wave_group_period_s < 0.0 || !(wave_group_depth >= 0.0 && wave_group_depth < 1.0))
    throw std::invalid_argument("wave group envelope out of range");
}

WaveAttitude wave_attitude(const NoiseProfile& np, std::uint64_t stream, int hull, double t_s)
{
  if (np.wave_amplitude_deg == 0.0) return {};
  Rng rng = Rng::stream(np.seed, {kWaveStream, stream, static_cast<std::uint64_t>(hull)});
  const double phase = 2.0 * kPi * rng.uniform();
  const double roll_offset = 2.0 * kPi * rng.uniform();
  const double group_phase = 2.0 * kPi * rng.uniform();

  double amplitude = np.wave_amplitude_deg;
  if (np.wave_group_period_s > 0.0 && np.wave_group_depth > 0.0) {
    const double m = np.wave_group_depth;
    amplitude *= (1.0 + m * std::sin(2.0 * kPi * t_s / np.wave_group_period_s + group_phase)) / (1.0 + m);
  }
  const double arg = 2.0 * kPi * t_s / np.wave_period_s + phase;
  return {amplitude * std::sin(arg + roll_offset), amplitude * std::sin(arg)};
}

SimFrame simulate_frame(const Pose6D& truth_camera_from_bundle, const BundleGeometry& bundle,
                        const CameraIntrinsics& k, const NoiseProfile& np, long frame, std::uint64_t stream)
{
  const double t_s = static_cast<double>(frame) / np.frame_rate_hz;
  const Eigen::Matrix3d body_cam = body_from_camera_rotation();
  const Eigen::Matrix3d carrier_bundle = carrier_from_bundle_rotation();

  // Canonical world: carrier at the origin with heading 0, so light
  // directions given in the carrier frame are world directions.
  const Pose6D world_from_bundle0(carrier_bundle, Eigen::Vector3d::Zero());
  const Pose6D world_from_camera0 = world_from_bundle0 * truth_camera_from_bundle.inverse();

  const WaveAttitude cam_wave = wave_attitude(np, stream, kCameraHull, t_s);
  const WaveAttitude tag_wave = wave_attitude(np, stream, kCarrierHull, t_s);
  const Pose6D world_from_cam =
      world_from_camera0 *
      Pose6D(Eigen::Matrix3d(body_cam.transpose() * wave_rotation(cam_wave.roll_deg, cam_wave.pitch_deg) * body_cam),
             Eigen::Vector3d::Zero());
  const Pose6D world_from_bun =
      world_from_bundle0 * Pose6D(Eigen::Matrix3d(carrier_bundle.transpose() *
                                                  wave_rotation(tag_wave.roll_deg, tag_wave.pitch_deg) * carrier_bundle),
                                  Eigen::Vector3d::Zero());

  SimFrame out;
  out.truth_camera_from_bundle =
      np.wave_amplitude_deg == 0.0 ? truth_camera_from_bundle : world_from_cam.inverse() * world_from_bun;
  const Eigen::Vector3d camera_world = world_from_cam.translation();
  const double cos_lobe = std::cos(deg2rad(np.glint_lobe_deg));

  std::vector<Detection> projected;
  std::vector<double> diagonals;
  for (const auto& placement : bundle.placements) {
    const Pose6D camera_from_tag = out.truth_camera_from_bundle * placement.tag_to_bundle;
    try {
      view_angle(camera_from_tag);
    } catch (const std::domain_error&) {
      continue;
    }
    Detection det;
    det.tag_id = placement.tag_id;
    det.frame_index = frame;
    const Corners3 local = tag_corners_local(placement.side_mm);
    bool visible = true;
    for (int i = 0; i < 4 && visible; ++i) {
      const auto px = project(k, camera_from_tag * local[i]);
      if (!px) visible = false;
      else det.corners[i] = *px;
    }
    if (!visible) continue;

    if (np.pixel_sigma > 0.0) {
      Rng rng = Rng::stream(np.seed, {kJitterStream, stream, static_cast<std::uint64_t>(frame),
                                      static_cast<std::uint64_t>(static_cast<std::int64_t>(placement.tag_id))});
      for (auto& c : det.corners) {
        const double du = np.pixel_sigma * rng.normal();
        const double dv = np.pixel_sigma * rng.normal();
        c += Eigen::Vector2d(du, dv);
      }
    }
    if (!inside_image(det.corners, k) || !is_strictly_convex(det.corners)) continue;

    const double diag = mean_diagonal(det.corners);
    diagonals.push_back(diag);
    out.in_view.push_back(placement.tag_id);

    if (!np.lights.empty() && np.glint_lobe_deg > 0.0) {
      const Pose6D world_from_tag = world_from_bun * placement.tag_to_bundle;
      const Eigen::Vector3d normal = world_from_tag.rotation() * Eigen::Vector3d::UnitZ();
      const Eigen::Vector3d view = (camera_world - world_from_tag.translation()).normalized();
      const double nv = normal.dot(view);
      if (nv > 0.0) {
        const Eigen::Vector3d mirror = 2.0 * nv * normal - view;
        for (const auto& light : np.lights) {
          const double az = deg2rad(light.azimuth_deg);
          const double el = deg2rad(light.elevation_deg);
          const Eigen::Vector3d dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
          if (mirror.dot(dir) > cos_lobe) {
            const auto center = project(k, camera_from_tag.translation());
            out.reflections.push_back(
                {center.value_or(Eigen::Vector2d::Zero()), np.glint_radius_frac * diag, frame, ReflectionKind::specular,
                 placement.tag_id});
            break;
          }
        }
      }
    }
    projected.push_back(det);
  }

  if (np.reflection_rate > 0.0) {
    Rng rng = Rng::stream(np.seed, {kDiskStream, stream, static_cast<std::uint64_t>(frame)});
    const int n = rng.poisson(np.reflection_rate);
    double diag = 0.0;
    for (double d : diagonals) diag += d;
    diag = diagonals.empty() ? 0.0 : diag / static_cast<double>(diagonals.size());
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform(0.0, k.width);
      const double v = rng.uniform(0.0, k.height);
      out.reflections.push_back({Eigen::Vector2d(u, v), np.reflection_radius_frac * diag, frame,
                                 ReflectionKind::scattered, -1});
    }
  }

  out.detections = apply_reflections(projected, out.reflections, np, stream);
  // Corruption can push corners outside the image.
  std::erase_if(out.detections, [&](const Detection& d) { return !inside_image(d.corners, k); });
  return out;
}

std::vector<Detection> apply_reflections(std::span<const Detection> dets, std::span<const ReflectionEvent> reflections,
                                         const NoiseProfile& np, std::uint64_t stream)
{
  std::vector<Detection> out;
  for (const auto& det : dets) {
    Detection d = det;
    bool killed = false;
    for (const auto& r : reflections) {
      const Disk disk{r.center, r.radius};
      if (!occludes(disk, d.corners, np.occlusion_kill_frac)) continue;
      if (!np.corrupt_instead_of_kill) {
        killed = true;
        break;
      }
      Rng rng = Rng::stream(np.seed, {kCorruptStream, stream, static_cast<std::uint64_t>(d.frame_index),
                                      static_cast<std::uint64_t>(static_cast<std::int64_t>(d.tag_id))});
      for (auto& c : d.corners) {
        if ((c - disk.center).norm() >= disk.radius) continue;
        const double angle = 2.0 * kPi * rng.uniform();
        const double mag = disk.radius * rng.uniform();
        c += mag * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      }
    }
    if (killed || !is_strictly_convex(d.corners)) continue;
    out.push_back(d);
  }
  return out;
}

double detection_rate(std::span<const std::vector<Detection>> frames, RateMode mode, int leader_tag_id)
{
  if (frames.empty()) throw std::invalid_argument("detection rate of an empty frame list");
  std::size_t hits = 0;
  for (const auto& f : frames) {
    if (mode == RateMode::bundle) {
      hits += f.empty() ? 0 : 1;
    } else {
      hits += std::any_of(f.begin(), f.end(), [&](const Detection& d) { return d.tag_id == leader_tag_id; }) ? 1 : 0;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(frames.size());
}

}  // namespace at3d
