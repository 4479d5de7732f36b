#include "at3d/bundle.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace at3d {

void BundleGeometry::validate() const
{
  if (placements.empty()) throw std::invalid_argument("bundle has no tags");
  int leaders = 0;
  std::set<int> ids;
  for (const auto& p : placements) {
    if (!(p.side_mm > 0.0)) throw std::invalid_argument("tag side length must be positive");
    if (!ids.insert(p.tag_id).second) throw std::invalid_argument("duplicate tag id in bundle");
    if (p.role == TagRole::leader) ++leaders;
  }
  if (leaders != 1) throw std::invalid_argument("bundle needs exactly one leader tag");
}

const TagPlacement& BundleGeometry::leader() const
{
  for (const auto& p : placements)
    if (p.role == TagRole::leader) return p;
  throw std::invalid_argument("bundle has no leader tag");
}

const TagPlacement* BundleGeometry::find(int tag_id) const
{
  for (const auto& p : placements)
    if (p.tag_id == tag_id) return &p;
  return nullptr;
}

BundleGeometry build_bundle(double leader_side_mm, int follower_count, double g_deg, double hinge_offset_mm,
                            int first_tag_id)
{
  if (!(leader_side_mm > 0.0)) throw std::invalid_argument("leader side length must be positive");
  if (follower_count < 0) throw std::invalid_argument("follower count must be non-negative");
  if (!(std::abs(g_deg) < 90.0)) throw std::invalid_argument("|g| must be below 90 degrees");
  if (hinge_offset_mm < 0.0) throw std::invalid_argument("hinge offset must be non-negative");

  BundleGeometry bundle;
  bundle.rotation_step_deg = g_deg;
  bundle.placements.push_back({first_tag_id, leader_side_mm, Pose6D::identity(), TagRole::leader});

  const double half = leader_side_mm / 2.0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Quaterniond prev_rot = Eigen::Quaterniond::Identity();
  for (int k = 1; k <= follower_count; ++k) {
    const Eigen::Quaterniond rot = axis_angle_deg(bundle.hinge_axis, k * g_deg);
    const Eigen::Vector3d hinge = center + prev_rot * Eigen::Vector3d(half, 0.0, 0.0);
    center = hinge + rot * Eigen::Vector3d(hinge_offset_mm + half, 0.0, 0.0);
    bundle.placements.push_back({first_tag_id + k, leader_side_mm, Pose6D(rot, center), TagRole::follower});
    prev_rot = rot;
  }
  return bundle;
}

Corners3 tag_corners_local(double side_mm)
{
  const double h = side_mm / 2.0;
  return {Eigen::Vector3d(-h, -h, 0.0), Eigen::Vector3d(h, -h, 0.0), Eigen::Vector3d(h, h, 0.0),
          Eigen::Vector3d(-h, h, 0.0)};
}

Corners3 tag_corners_bundle_frame(const TagPlacement& placement)
{
  Corners3 corners = tag_corners_local(placement.side_mm);
  for (auto& c : corners) c = placement.tag_to_bundle * c;
  return corners;
}

double view_angle(const Pose6D& camera_from_tag)
{
  const Eigen::Vector3d& t = camera_from_tag.translation();
  if (!(t.z() > 0.0)) throw std::domain_error("tag is behind the camera");
  const Eigen::Vector3d normal = camera_from_tag.rotation() * Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d to_camera = -t.normalized();
  const double angle = rad2deg(std::atan2(normal.cross(to_camera).norm(), normal.dot(to_camera)));
  if (!(angle < 90.0)) throw std::domain_error("tag faces away from the camera");
  return angle;
}

PlanarPose to_planar(const Pose6D& camera_from_tag)
{
  const Eigen::Vector3d& t = camera_from_tag.translation();
  const Eigen::Vector3d normal = camera_from_tag.rotation() * Eigen::Vector3d::UnitZ();
  return {t.z(), t.x(), wrap_deg(rad2deg(std::atan2(normal.x(), -normal.z())))};
}

Pose6D camera_from_planar(const PlanarPose& planar)
{
  const Eigen::Quaterniond rot =
      axis_angle_deg(Eigen::Vector3d::UnitX(), 180.0) * axis_angle_deg(Eigen::Vector3d::UnitY(), planar.psi);
  return Pose6D(rot, Eigen::Vector3d(planar.d_y, 0.0, planar.d_x));
}

}  // namespace at3d
