#pragma once

#include <optional>

#include <Eigen/Core>

namespace at3d {

/// Pinhole camera. Camera frame: +Z forward, +X right, +Y down.
struct CameraIntrinsics {
  double fx = 900.0;
  double fy = 900.0;
  double cx = 640.0;
  double cy = 360.0;
  int width = 1280;
  int height = 720;

  /// Throws std::invalid_argument when the parameters are not usable.
  void validate() const;

  bool contains(const Eigen::Vector2d& px) const
  {
    return px.x() >= 0.0 && px.y() >= 0.0 && px.x() < width && px.y() < height;
  }

  /// Pixel to normalized image coordinates (z = 1 plane).
  Eigen::Vector2d normalize(const Eigen::Vector2d& px) const
  {
    return {(px.x() - cx) / fx, (px.y() - cy) / fy};
  }
};

/// Projects a camera-frame point. Returns nullopt when the point is at or
/// behind the image plane (Z <= 0).
std::optional<Eigen::Vector2d> project(const CameraIntrinsics& k, const Eigen::Vector3d& camera_from_point);

}  // namespace at3d
