#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "at3d/bundle.hpp"
#include "at3d/camera.hpp"
#include "at3d/pose.hpp"
#include "oracles/matrix_oracle.hpp"

using namespace at3d;

namespace {

Pose6D random_pose(std::mt19937_64& gen)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> depth(300.0, 5000.0);
  Eigen::Vector4d q(u(gen), u(gen), u(gen), u(gen));
  return Pose6D(Eigen::Quaterniond(q(0), q(1), q(2), q(3)), Eigen::Vector3d(200 * u(gen), 200 * u(gen), depth(gen)));
}

oracle::Mat4 to_oracle(const Pose6D& p)
{
  const Eigen::Matrix4d m = p.matrix();
  oracle::Mat4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r * 4 + c] = m(r, c);
  return out;
}

}  // namespace

TEST(Pose, QuaternionStaysUnitAfterComposition)
{
  std::mt19937_64 gen(1);
  Pose6D acc;
  for (int i = 0; i < 1000; ++i) {
    acc = acc * random_pose(gen);
    EXPECT_NEAR(acc.rotation().norm(), 1.0, 1e-9);
  }
}

TEST(Pose, ComposeWithInverseIsIdentity)
{
  std::mt19937_64 gen(2);
  for (int i = 0; i < 1000; ++i) {
    const Pose6D p = random_pose(gen);
    for (const Pose6D& e : {compose(p, invert(p)), compose(invert(p), p)}) {
      const PoseError err = pose_error(e, Pose6D::identity());
      EXPECT_LT(err.translation_mm, 1e-9);
      EXPECT_LT(err.rotation_rad, 1e-9);
    }
  }
}

TEST(Pose, CompositionMatchesMatrixOracle)
{
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    const Pose6D a = random_pose(gen);
    const Pose6D b = random_pose(gen);
    const oracle::Mat4 m = oracle::multiply(to_oracle(a), to_oracle(b));
    const Eigen::Vector3d p(10.0 * i, -5.0, 7.0);
    const Eigen::Vector3d got = (a * b) * p;
    const oracle::Vec3 want = oracle::apply(m, {p.x(), p.y(), p.z()});
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(got(k), want[k], 1e-9);
  }
}

TEST(Pose, WrapDegrees)
{
  EXPECT_DOUBLE_EQ(wrap_deg(180.0), 180.0);
  EXPECT_DOUBLE_EQ(wrap_deg(-180.0), 180.0);
  EXPECT_NEAR(wrap_deg(185.0), -175.0, 1e-12);
  EXPECT_NEAR(wrap_deg(-190.0), 170.0, 1e-12);
  EXPECT_NEAR(wrap_deg(720.0 + 10.0), 10.0, 1e-12);
}

TEST(Camera, ProjectExamples)
{
  CameraIntrinsics k{600, 600, 320, 240, 640, 480};
  const auto a = project(k, {0, 0, 1000});
  ASSERT_TRUE(a);
  EXPECT_DOUBLE_EQ(a->x(), 320.0);
  EXPECT_DOUBLE_EQ(a->y(), 240.0);
  const auto b = project(k, {100, 0, 1000});
  ASSERT_TRUE(b);
  EXPECT_DOUBLE_EQ(b->x(), 380.0);
  EXPECT_DOUBLE_EQ(b->y(), 240.0);
  EXPECT_FALSE(project(k, {0, 0, -5}));
  EXPECT_FALSE(project(k, {0, 0, 0}));
}

TEST(Camera, DoublingFocalLengthDoublesOffset)
{
  std::mt19937_64 gen(4);
  CameraIntrinsics k;
  CameraIntrinsics k2 = k;
  k2.fx *= 2.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p = random_pose(gen).translation();
    EXPECT_NEAR(project(k2, p)->x() - k.cx, 2.0 * (project(k, p)->x() - k.cx), 1e-9);
  }
}

TEST(Camera, ValidateRejectsBadIntrinsics)
{
  CameraIntrinsics k;
  k.fx = 0;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  k = CameraIntrinsics{};
  k.cx = k.width;
  EXPECT_THROW(k.validate(), std::invalid_argument);
}

TEST(Bundle, IdentityCornersCounterClockwiseFromBottomLeft)
{
  TagPlacement p{0, 100.0, Pose6D::identity(), TagRole::leader};
  const Corners3 c = tag_corners_bundle_frame(p);
  EXPECT_EQ(c[0], Eigen::Vector3d(-50, -50, 0));
  EXPECT_EQ(c[1], Eigen::Vector3d(50, -50, 0));
  EXPECT_EQ(c[2], Eigen::Vector3d(50, 50, 0));
  EXPECT_EQ(c[3], Eigen::Vector3d(-50, 50, 0));
}

TEST(Bundle, RotatedPlacementMatchesOracle)
{
  TagPlacement p{0, 100.0, Pose6D(axis_angle_deg(Eigen::Vector3d::UnitZ(), 90.0), Eigen::Vector3d::Zero()),
                 TagRole::leader};
  const Corners3 c = tag_corners_bundle_frame(p);
  const oracle::Mat4 m = oracle::rotation({0, 0, 1}, 90.0);
  for (int i = 0; i < 4; ++i) {
    const oracle::Vec3 want = oracle::apply(m, oracle::square_corner(100.0, i));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(c[i](k), want[k], 1e-12);
  }
}

TEST(Bundle, LeaderOfTwoTagBundle)
{
  const BundleGeometry b = build_bundle(130.0, 1, 10.0, 0.0);
  ASSERT_EQ(b.placements.size(), 2u);
  const Corners3 c = tag_corners_bundle_frame(b.leader());
  EXPECT_EQ(c[0], Eigen::Vector3d(-65, -65, 0));
  EXPECT_EQ(c[2], Eigen::Vector3d(65, 65, 0));
  const Eigen::Vector3d n0 = b.placements[0].tag_to_bundle.rotation() * Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d n1 = b.placements[1].tag_to_bundle.rotation() * Eigen::Vector3d::UnitZ();
  EXPECT_NEAR(rad2deg(std::acos(n0.dot(n1))), 10.0, 1e-9);
}

TEST(Bundle, ZeroFollowersIsSingleIdentityPlacement)
{
  const BundleGeometry b = build_bundle(130.0, 0, 10.0, 0.0);
  ASSERT_EQ(b.placements.size(), 1u);
  const TagPlacement single{0, 130.0, Pose6D::identity(), TagRole::leader};
  EXPECT_EQ(b.placements[0].tag_id, single.tag_id);
  EXPECT_EQ(b.placements[0].side_mm, single.side_mm);
  EXPECT_EQ(b.placements[0].role, single.role);
  EXPECT_EQ(b.placements[0].tag_to_bundle.matrix(), single.tag_to_bundle.matrix());
}

TEST(Bundle, ThreeTagCornersMatchMatrixOracle)
{
  for (double gap : {0.0, 12.5}) {
    const BundleGeometry b = build_bundle(130.0, 2, 15.0, gap);
    ASSERT_EQ(b.placements.size(), 3u);
    for (int k = 1; k <= 2; ++k) {
      const oracle::Mat4 m = oracle::follower_transform(130.0, 15.0, gap, k);
      const Corners3 c = tag_corners_bundle_frame(b.placements[k]);
      for (int i = 0; i < 4; ++i) {
        const oracle::Vec3 want = oracle::apply(m, oracle::square_corner(130.0, i));
        for (int a = 0; a < 3; ++a) EXPECT_NEAR(c[i](a), want[a], 1e-9) << "follower " << k << " corner " << i;
      }
      const Eigen::Vector3d n = b.placements[k].tag_to_bundle.rotation() * Eigen::Vector3d::UnitZ();
      EXPECT_NEAR(rad2deg(std::acos(std::clamp(n.z(), -1.0, 1.0))), 15.0 * k, 1e-9);
    }
  }
}

TEST(Bundle, FollowerRotationIsHingeRotationByKg)
{
  const BundleGeometry b = build_bundle(100.0, 4, 7.5, 3.0);
  for (int k = 1; k <= 4; ++k) {
    const Eigen::Quaterniond want = axis_angle_deg(b.hinge_axis, k * 7.5);
    EXPECT_LT(rotation_distance(b.placements[k].tag_to_bundle.rotation(), want), 1e-9);
  }
}

TEST(Bundle, FollowersShareAnEdgeWithPredecessor)
{
  const BundleGeometry b = build_bundle(130.0, 3, 10.0, 0.0);
  for (int k = 1; k <= 3; ++k) {
    const Corners3 prev = tag_corners_bundle_frame(b.placements[k - 1]);
    const Corners3 cur = tag_corners_bundle_frame(b.placements[k]);
    // Right edge of the previous tag is the left edge of this one.
    EXPECT_LT((prev[1] - cur[0]).norm(), 1e-9);
    EXPECT_LT((prev[2] - cur[3]).norm(), 1e-9);
  }
}

TEST(Bundle, RejectsBadInput)
{
  EXPECT_THROW(build_bundle(0.0, 1, 10.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_bundle(-5.0, 1, 10.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_bundle(130.0, 1, 90.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_bundle(130.0, 1, -95.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_bundle(130.0, -1, 10.0, 0.0), std::invalid_argument);

  BundleGeometry two_leaders = build_bundle(130.0, 1, 10.0, 0.0);
  two_leaders.placements[1].role = TagRole::leader;
  EXPECT_THROW(two_leaders.validate(), std::invalid_argument);
}

TEST(Planar, ViewAngleExamples)
{
  EXPECT_NEAR(view_angle(camera_from_planar({1800, 0, 0})), 0.0, 1e-12);

  // Tag yawed 10 degrees about its vertical axis, camera still on the old normal.
  const Pose6D yawed = camera_from_planar({1000, 0, 0}) *
                       Pose6D(axis_angle_deg(Eigen::Vector3d::UnitY(), 10.0), Eigen::Vector3d::Zero());
  EXPECT_NEAR(view_angle(yawed), 10.0, 1e-9);

  const Pose6D behind(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, -100));
  EXPECT_THROW(view_angle(behind), std::domain_error);
}

TEST(Planar, FollowerViewAngleApproachesHingeAngleWithDistance)
{
  // The follower centre sits off the leader's axis, so a camera frontal to
  // the leader sees the follower at 10 degrees plus a parallax term that
  // vanishes with distance.
  const BundleGeometry b = build_bundle(130.0, 1, 10.0, 0.0);
  const double offset = b.placements[1].tag_to_bundle.translation().norm();
  double prev_gap = 1e9;
  for (double d : {1800.0, 5000.0, 20000.0, 1e6}) {
    const double angle = view_angle(camera_from_planar({d, 0, 0}) * b.placements[1].tag_to_bundle);
    const double gap = std::abs(angle - 10.0);
    EXPECT_LT(gap, prev_gap);
    EXPECT_LE(gap, rad2deg(std::atan(offset / d)) + 1e-9);
    prev_gap = gap;
  }
}

TEST(Planar, ToPlanarExamples)
{
  const PlanarPose p = to_planar(camera_from_planar({1800, 0, 0}));
  EXPECT_NEAR(p.d_x, 1800, 1e-9);
  EXPECT_NEAR(p.d_y, 0, 1e-9);
  EXPECT_NEAR(p.psi, 0, 1e-9);

  // Camera shifted 100 mm sideways, same orientation: the tag appears 100 mm
  // to the right of the boresight.
  const Pose6D shifted = Pose6D(Eigen::Matrix3d::Identity(), Eigen::Vector3d(-100, 0, 0)).inverse() *
                         camera_from_planar({1800, 0, 0});
  const PlanarPose q = to_planar(shifted);
  EXPECT_NEAR(q.d_y, 100, 1e-9);
  EXPECT_NEAR(q.psi, 0, 1e-9);
}

TEST(Planar, CameraTurnedToFaceOffsetTagReadsTrueBearing)
{
  // Tag 300 mm to the right at 1800 mm. Camera turns right until the tag is
  // centred; the reading becomes d_y = 0 and psi equals the bearing.
  const Pose6D start = camera_from_planar({1800, 300, 0});
  const double bearing = rad2deg(std::atan2(300.0, 1800.0));
  const oracle::Mat4 cam_turn = oracle::rotation({0, 1, 0}, bearing);  // turn about camera "down" axis
  const oracle::Mat4 m = oracle::multiply(oracle::rigid_inverse(cam_turn), to_oracle(start));
  Eigen::Matrix4d e;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) e(r, c) = m[r * 4 + c];
  const PlanarPose p = to_planar(Pose6D(Eigen::Matrix3d(e.topLeftCorner<3, 3>()), Eigen::Vector3d(e.topRightCorner<3, 1>())));
  EXPECT_NEAR(p.d_y, 0.0, 1e-9);
  EXPECT_NEAR(p.d_x, std::hypot(1800.0, 300.0), 1e-9);
  // Oracle value of the tag normal's heading in the turned camera.
  const oracle::Vec3 n0 = oracle::apply(m, {0, 0, 1});
  const oracle::Vec3 o0 = oracle::apply(m, {0, 0, 0});
  const double want = rad2deg(std::atan2(n0[0] - o0[0], -(n0[2] - o0[2])));
  EXPECT_NEAR(p.psi, want, 1e-9);
  EXPECT_NEAR(std::abs(p.psi), bearing, 1e-9);
}

TEST(Planar, RoundTrip)
{
  for (double psi : {-60.0, -10.0, 0.0, 25.0, 80.0}) {
    const PlanarPose in{1234.5, -77.0, psi};
    const PlanarPose out = to_planar(camera_from_planar(in));
    EXPECT_NEAR(out.d_x, in.d_x, 1e-9);
    EXPECT_NEAR(out.d_y, in.d_y, 1e-9);
    EXPECT_NEAR(out.psi, in.psi, 1e-9);
  }
}
