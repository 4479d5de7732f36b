#include "at3d/pose.hpp"

#include <cmath>

namespace at3d {

double wrap_deg(double deg)
{
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

Pose6D::Pose6D(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation.normalized()), translation_(translation)
{
}

Pose6D::Pose6D(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(Eigen::Quaterniond(rotation).normalized()), translation_(translation)
{
}

Eigen::Matrix4d Pose6D::matrix() const
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose6D Pose6D::inverse() const
{
  const Eigen::Quaterniond inv = rotation_.conjugate();
  return Pose6D(inv, -(inv * translation_));
}

Pose6D Pose6D::operator*(const Pose6D& rhs) const
{
  return Pose6D(rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_);
}

Eigen::Vector3d Pose6D::operator*(const Eigen::Vector3d& point) const
{
  return rotation_ * point + translation_;
}

double rotation_distance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b)
{
  // atan2 form keeps precision near zero where acos(|dot|) does not.
  const Eigen::Quaterniond d = a.conjugate() * b;
  const double s = d.vec().norm();
  return 2.0 * std::atan2(s, std::abs(d.w()));
}

PoseError pose_error(const Pose6D& a, const Pose6D& b)
{
  return {(a.translation() - b.translation()).norm(), rotation_distance(a.rotation(), b.rotation())};
}

Eigen::Quaterniond axis_angle_deg(const Eigen::Vector3d& axis, double angle_deg)
{
  return Eigen::Quaterniond(Eigen::AngleAxisd(deg2rad(angle_deg), axis.normalized()));
}

}  // namespace at3d
