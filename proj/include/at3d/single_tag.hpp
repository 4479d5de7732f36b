#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "at3d/bundle.hpp"
#include "at3d/camera.hpp"
#include "at3d/pose.hpp"

namespace at3d {

using Corners2 = std::array<Eigen::Vector2d, 4>;

/// One tag's observed image corners, CCW from bottom-left.
struct Detection {
  int tag_id = 0;
  Corners2 corners;
  long frame_index = 0;
};

/// True when the corners form a strictly convex quadrilateral in the stated
/// winding (any consistent orientation is accepted).
bool is_strictly_convex(const Corners2& corners);

class EstimationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SingleTagEstimate {
  Pose6D camera_from_tag;
  double rms_px = 0.0;
  /// Both planar-ambiguity candidates fit within 5%; the more frontal was kept.
  bool ambiguous = false;
  Pose6D alternative;
  double alternative_rms_px = 0.0;
};

/// Homography mapping tag-plane points (mm, z = 0) to normalized image
/// coordinates, scaled so that H(2,2) = 1. Throws EstimationFailed when the
/// four correspondences are degenerate.
Eigen::Matrix3d tag_homography(const Corners2& normalized_image, double side_mm);

/// The two rotation candidates of the planar pose ambiguity, recovered from
/// the homography's first-order behaviour at the tag centre.
std::array<Eigen::Matrix3d, 2> planar_rotation_candidates(const Eigen::Matrix3d& homography);

/// Mean-squared-reprojection-optimal pose of one square tag from its corners.
/// Throws EstimationFailed for degenerate or non-convex quadrilaterals and
/// when no candidate places the tag in front of the camera.
SingleTagEstimate estimate_single_tag(const Detection& det, const TagPlacement& placement, const CameraIntrinsics& k);

/// Root-mean-square corner reprojection error (px) of a camera_from_tag pose.
double reprojection_rms(const Pose6D& camera_from_tag, const Corners2& corners, double side_mm,
                        const CameraIntrinsics& k);

}  // namespace at3d
