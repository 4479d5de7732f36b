#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "at3d/pose.hpp"

namespace at3d {

// Tag frame: corners lie in the z = 0 plane, x to the right and y up as seen
// from the front, z is the outward normal (pointing at a viewer in front).
// The bundle frame is the leader's tag frame.

enum class TagRole { leader, follower };

struct TagPlacement {
  int tag_id = 0;
  double side_mm = 0.0;
  Pose6D tag_to_bundle;  ///< bundle_from_tag
  TagRole role = TagRole::leader;
};

using Corners3 = std::array<Eigen::Vector3d, 4>;

struct BundleGeometry {
  std::vector<TagPlacement> placements;
  Eigen::Vector3d hinge_axis = Eigen::Vector3d::UnitY();
  double rotation_step_deg = 0.0;

  /// Throws std::invalid_argument on an empty bundle, a non-positive side
  /// length, duplicate tag ids or anything but exactly one leader.
  void validate() const;

  const TagPlacement& leader() const;
  const TagPlacement* find(int tag_id) const;
};

/// Leader in the bundle XY plane at the origin, followers chained to the
/// right, each sharing an edge with its predecessor (plus `hinge_offset_mm`
/// of screen gap) and rotated k * g_deg about the hinge axis. Positive g
/// turns followers away from a frontal viewer.
BundleGeometry build_bundle(double leader_side_mm, int follower_count, double g_deg, double hinge_offset_mm,
                            int first_tag_id = 0);

/// Corners (mm, bundle frame), CCW from bottom-left as seen from the front.
Corners3 tag_corners_bundle_frame(const TagPlacement& placement);

/// Corners of a square of side `side_mm` in its own tag frame.
Corners3 tag_corners_local(double side_mm);

/// Longitudinal/lateral distance and yaw between camera and tag on the water
/// plane. Camera squarely in front of the tag gives d_y = 0 and psi = 0.
struct PlanarPose {
  double d_x = 0.0;  ///< mm along the camera boresight
  double d_y = 0.0;  ///< mm to the right of the boresight
  double psi = 0.0;  ///< degrees, (-180, 180]
};

/// Angle (deg) between the tag's outward normal and the direction from the
/// tag centre to the camera. Throws std::domain_error if the tag is behind
/// the camera or faces away from it.
double view_angle(const Pose6D& camera_from_tag);

PlanarPose to_planar(const Pose6D& camera_from_tag);

/// Pose that `to_planar` maps back to `planar` (no roll or pitch).
Pose6D camera_from_planar(const PlanarPose& planar);

}  // namespace at3d
