#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace at3d {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees to (-180, 180].
double wrap_deg(double deg);

/// Rigid transform. Translation in millimetres, rotation as a unit quaternion.
///
/// Named by the frames it relates: `camera_from_tag` maps points expressed
/// in the tag frame into the camera frame.
class Pose6D {
 public:
  Pose6D() = default;
  Pose6D(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation);
  Pose6D(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Pose6D identity() { return {}; }

  const Eigen::Vector3d& translation() const { return translation_; }
  const Eigen::Quaterniond& rotation() const { return rotation_; }
  Eigen::Matrix3d rotation_matrix() const { return rotation_.toRotationMatrix(); }
  Eigen::Matrix4d matrix() const;

  Pose6D inverse() const;
  Pose6D operator*(const Pose6D& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& point) const;

 private:
  Eigen::Quaterniond rotation_ = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
};

inline Pose6D compose(const Pose6D& a, const Pose6D& b) { return a * b; }
inline Pose6D invert(const Pose6D& p) { return p.inverse(); }

/// Geodesic angle (radians) between two rotations, in [0, pi].
double rotation_distance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

/// Translation distance (mm) and rotation distance (rad) between two poses.
struct PoseError {
  double translation_mm = 0.0;
  double rotation_rad = 0.0;
};
PoseError pose_error(const Pose6D& a, const Pose6D& b);

Eigen::Quaterniond axis_angle_deg(const Eigen::Vector3d& axis, double angle_deg);

}  // namespace at3d
