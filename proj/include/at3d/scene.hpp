#pragma once

#include <Eigen/Core>

#include "at3d/pose.hpp"

namespace at3d {

// World frame: water plane with Z up; headings are measured about +Z from +X.
// Boat body frame: x forward, y left, z up. Cameras sit at the bow looking
// forward; tag bundles sit at the stern facing aft, all at one mount height
// (the world z = 0 plane).

/// Rotation taking camera-frame vectors to the boat body frame.
Eigen::Matrix3d body_from_camera_rotation();

/// Rotation taking bundle-frame vectors to the carrier body frame.
Eigen::Matrix3d carrier_from_bundle_rotation();

/// Body rotation for a wave roll (about x) and pitch (about y), in degrees.
Eigen::Matrix3d wave_rotation(double roll_deg, double pitch_deg);

/// Camera mounted `forward_offset_mm` ahead of the boat origin.
Pose6D world_from_camera(const Eigen::Vector2d& position, double heading_deg, double forward_offset_mm = 0.0,
                         double roll_deg = 0.0, double pitch_deg = 0.0);

/// Bundle mounted `aft_offset_mm` behind the carrier origin, facing aft.
Pose6D world_from_bundle(const Eigen::Vector2d& position, double heading_deg, double aft_offset_mm = 0.0,
                         double roll_deg = 0.0, double pitch_deg = 0.0);

}  // namespace at3d
