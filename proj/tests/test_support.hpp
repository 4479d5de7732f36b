#pragma once

#include <optional>
#include <random>

#include "at3d/bundle.hpp"
#include "at3d/camera.hpp"
#include "at3d/single_tag.hpp"

namespace testing_support {

/// Exact (noise-free) detection of one placement seen from camera_from_bundle.
inline std::optional<at3d::Detection> render(const at3d::Pose6D& camera_from_bundle, const at3d::TagPlacement& p,
                                             const at3d::CameraIntrinsics& k, long frame = 0)
{
  at3d::Detection d;
  d.tag_id = p.tag_id;
  d.frame_index = frame;
  const at3d::Corners3 c = at3d::tag_corners_bundle_frame(p);
  for (int i = 0; i < 4; ++i) {
    const auto px = at3d::project(k, camera_from_bundle * c[i]);
    if (!px) return std::nullopt;
    d.corners[i] = *px;
  }
  return d;
}

/// Random camera_from_tag with the centre at depth [300, 5000] mm inside the
/// field of view and the tag turned less than `max_view_deg` from the line
/// of sight, with arbitrary in-plane roll.
inline at3d::Pose6D random_visible_pose(std::mt19937_64& gen, const at3d::CameraIntrinsics& k, double max_view_deg)
{
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double z = 300.0 + 4700.0 * u01(gen);
  const double px = k.width * (0.2 + 0.6 * u01(gen));
  const double py = k.height * (0.2 + 0.6 * u01(gen));
  const Eigen::Vector3d t((px - k.cx) / k.fx * z, (py - k.cy) / k.fy * z, z);

  // Normal: the to-camera direction tilted by an angle below max_view_deg.
  const Eigen::Vector3d to_cam = -t.normalized();
  const Eigen::Vector3d perp = to_cam.unitOrthogonal();
  const double tilt = at3d::deg2rad(max_view_deg) * std::sqrt(u01(gen)) * 0.999;
  const double spin = 2.0 * at3d::kPi * u01(gen);
  const Eigen::Vector3d axis = Eigen::AngleAxisd(spin, to_cam) * perp;
  const Eigen::Vector3d normal = Eigen::AngleAxisd(tilt, axis) * to_cam;

  const Eigen::Quaterniond align = Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), normal);
  const Eigen::Quaterniond roll(Eigen::AngleAxisd(2.0 * at3d::kPi * u01(gen), Eigen::Vector3d::UnitZ()));
  return at3d::Pose6D(align * roll, t);
}

}  // namespace testing_support
