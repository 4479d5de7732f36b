#include "at3d/scene.hpp"

namespace at3d {
namespace {

Eigen::Matrix3d yaw_rotation(double heading_deg)
{
  return axis_angle_deg(Eigen::Vector3d::UnitZ(), heading_deg).toRotationMatrix();
}

}  // namespace

Eigen::Matrix3d body_from_camera_rotation()
{
  Eigen::Matrix3d r;
  // columns: camera x (right), y (down), z (forward) in body axes
  r.col(0) = -Eigen::Vector3d::UnitY();
  r.col(1) = -Eigen::Vector3d::UnitZ();
  r.col(2) = Eigen::Vector3d::UnitX();
  return r;
}

Eigen::Matrix3d carrier_from_bundle_rotation()
{
  Eigen::Matrix3d r;
  // columns: bundle x (viewer's right), y (up), z (outward normal, aft)
  r.col(0) = -Eigen::Vector3d::UnitY();
  r.col(1) = Eigen::Vector3d::UnitZ();
  r.col(2) = -Eigen::Vector3d::UnitX();
  return r;
}

Eigen::Matrix3d wave_rotation(double roll_deg, double pitch_deg)
{
  return (axis_angle_deg(Eigen::Vector3d::UnitY(), pitch_deg) * axis_angle_deg(Eigen::Vector3d::UnitX(), roll_deg))
      .toRotationMatrix();
}

Pose6D world_from_camera(const Eigen::Vector2d& position, double heading_deg, double forward_offset_mm,
                         double roll_deg, double pitch_deg)
{
  const Eigen::Matrix3d yaw = yaw_rotation(heading_deg);
  const Eigen::Vector3d mount = Eigen::Vector3d(position.x(), position.y(), 0.0) +
                                yaw * Eigen::Vector3d(forward_offset_mm, 0.0, 0.0);
  return Pose6D(Eigen::Matrix3d(yaw * wave_rotation(roll_deg, pitch_deg) * body_from_camera_rotation()), mount);
}

Pose6D world_from_bundle(const Eigen::Vector2d& position, double heading_deg, double aft_offset_mm, double roll_deg,
                         double pitch_deg)
{
  const Eigen::Matrix3d yaw = yaw_rotation(heading_deg);
  const Eigen::Vector3d mount =
      Eigen::Vector3d(position.x(), position.y(), 0.0) + yaw * Eigen::Vector3d(-aft_offset_mm, 0.0, 0.0);
  return Pose6D(Eigen::Matrix3d(yaw * wave_rotation(roll_deg, pitch_deg) * carrier_from_bundle_rotation()), mount);
}

}  // namespace at3d
