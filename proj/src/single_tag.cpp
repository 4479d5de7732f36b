#include "at3d/single_tag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace at3d {
namespace {

constexpr double kDegenerateRatio = 1e-8;
constexpr double kAmbiguityBand = 0.05;
constexpr int kMaxIterations = 50;
constexpr double kStepTolerance = 1e-10;

// Similarity transform taking points to zero mean and mean distance sqrt(2).
Eigen::Matrix3d normalizing_transform(const std::array<Eigen::Vector2d, 4>& pts)
{
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= 4.0;
  double dist = 0.0;
  for (const auto& p : pts) dist += (p - mean).norm();
  dist /= 4.0;
  const double s = dist > 0.0 ? std::sqrt(2.0) / dist : 1.0;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * mean.x(), 0.0, s, -s * mean.y(), 0.0, 0.0, 1.0;
  return t;
}

Eigen::Vector2d apply_h(const Eigen::Matrix3d& h, const Eigen::Vector2d& p)
{
  const Eigen::Vector3d q = h * p.homogeneous();
  return q.hnormalized();
}

Eigen::Vector3d solve_translation(const Eigen::Matrix3d& r, const Corners3& model, const Corners2& normalized)
{
  Eigen::Matrix<double, 8, 3> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d rx = r * model[i];
    const double x = normalized[i].x();
    const double y = normalized[i].y();
    a.row(2 * i) << 1.0, 0.0, -x;
    a.row(2 * i + 1) << 0.0, 1.0, -y;
    b(2 * i) = x * rx.z() - rx.x();
    b(2 * i + 1) = y * rx.z() - rx.y();
  }
  return a.colPivHouseholderQr().solve(b);
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v)
{
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

double sum_sq_residual(const Eigen::Matrix3d& r, const Eigen::Vector3d& t, const Corners3& model,
                       const Corners2& corners, const CameraIntrinsics& k)
{
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d p = r * model[i] + t;
    if (!(p.z() > 0.0)) return std::numeric_limits<double>::infinity();
    const Eigen::Vector2d uv(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
    sum += (uv - corners[i]).squaredNorm();
  }
  return sum;
}

// Gauss-Newton on the pixel reprojection residual with a left-multiplied
// rotation increment. Halves the step when the cost would increase.
void refine(Eigen::Matrix3d& r, Eigen::Vector3d& t, const Corners3& model, const Corners2& corners,
            const CameraIntrinsics& k)
{
  double cost = sum_sq_residual(r, t, model, corners, k);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    Eigen::Matrix<double, 8, 6> jac;
    Eigen::Matrix<double, 8, 1> res;
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector3d rx = r * model[i];
      const Eigen::Vector3d p = rx + t;
      const double iz = 1.0 / p.z();
      Eigen::Matrix<double, 2, 3> dproj;
      dproj << k.fx * iz, 0.0, -k.fx * p.x() * iz * iz, 0.0, k.fy * iz, -k.fy * p.y() * iz * iz;
      jac.block<2, 3>(2 * i, 0) = dproj * (-skew(rx));
      jac.block<2, 3>(2 * i, 3) = dproj;
      res(2 * i) = k.fx * p.x() * iz + k.cx - corners[i].x();
      res(2 * i + 1) = k.fy * p.y() * iz + k.cy - corners[i].y();
    }
    const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
    Eigen::Matrix<double, 6, 1> step = jtj.ldlt().solve(-jac.transpose() * res);
    if (!step.allFinite()) return;

    bool accepted = false;
    for (int halving = 0; halving < 8; ++halving) {
      const Eigen::Vector3d w = step.head<3>();
      const double angle = w.norm();
      const Eigen::Matrix3d dr =
          angle > 0.0 ? Eigen::AngleAxisd(angle, w / angle).toRotationMatrix() : Eigen::Matrix3d::Identity();
      const Eigen::Matrix3d r_new = dr * r;
      const Eigen::Vector3d t_new = t + step.tail<3>();
      const double c = sum_sq_residual(r_new, t_new, model, corners, k);
      if (c <= cost) {
        r = r_new;
        t = t_new;
        cost = c;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || step.norm() < kStepTolerance) return;
  }
}

double signed_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c)
{
  return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

}  // namespace

bool is_strictly_convex(const Corners2& c)
{
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const double a = signed_area2(c[i], c[(i + 1) % 4], c[(i + 2) % 4]);
    if (!std::isfinite(a) || a == 0.0) return false;
    const int s = a > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

Eigen::Matrix3d tag_homography(const Corners2& normalized_image, double side_mm)
{
  const Corners3 model3 = tag_corners_local(side_mm);
  std::array<Eigen::Vector2d, 4> model;
  for (int i = 0; i < 4; ++i) model[i] = model3[i].head<2>();

  const Eigen::Matrix3d tm = normalizing_transform(model);
  const Eigen::Matrix3d ti = normalizing_transform(normalized_image);

  Eigen::Matrix<double, 9, 9> a = Eigen::Matrix<double, 9, 9>::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d m = apply_h(tm, model[i]);
    const Eigen::Vector2d u = apply_h(ti, normalized_image[i]);
    a.row(2 * i) << -m.x(), -m.y(), -1.0, 0.0, 0.0, 0.0, u.x() * m.x(), u.x() * m.y(), u.x();
    a.row(2 * i + 1) << 0.0, 0.0, 0.0, -m.x(), -m.y(), -1.0, u.y() * m.x(), u.y() * m.y(), u.y();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // Row 9 is padding, so s(8) == 0; a rank-deficient 8x9 system shows up in s(7).
  if (!(s(0) > 0.0) || s(7) / s(0) < kDegenerateRatio) throw EstimationFailed("degenerate tag quadrilateral");

  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Eigen::Matrix3d hm = ti.inverse() * hn * tm;
  if (std::abs(hm(2, 2)) < 1e-300) throw EstimationFailed("degenerate homography");
  hm /= hm(2, 2);
  return hm;
}

std::array<Eigen::Matrix3d, 2> planar_rotation_candidates(const Eigen::Matrix3d& h)
{
  const double p = h(0, 2);
  const double q = h(1, 2);
  Eigen::Matrix2d jac;
  jac << h(0, 0) - h(2, 0) * h(0, 2), h(0, 1) - h(2, 1) * h(0, 2), h(1, 0) - h(2, 0) * h(1, 2),
      h(1, 1) - h(2, 1) * h(1, 2);

  const Eigen::Matrix3d rv =
      Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), Eigen::Vector3d(p, q, 1.0)).toRotationMatrix();
  Eigen::Matrix<double, 2, 3> proj;
  proj << 1.0, 0.0, -p, 0.0, 1.0, -q;
  const Eigen::Matrix2d b = proj * rv.leftCols<2>();
  const Eigen::Matrix2d a = b.inverse() * jac;

  const Eigen::Matrix2d aat = a * a.transpose();
  const double gamma = std::sqrt(
      0.5 * (aat(0, 0) + aat(1, 1) + std::sqrt(std::pow(aat(0, 0) - aat(1, 1), 2) + 4.0 * aat(0, 1) * aat(0, 1))));
  const Eigen::Matrix2d r22 = a / gamma;

  const Eigen::Matrix2d hh = Eigen::Matrix2d::Identity() - r22.transpose() * r22;
  double b0 = std::sqrt(std::max(0.0, hh(0, 0)));
  double b1 = std::sqrt(std::max(0.0, hh(1, 1)));
  if (hh(0, 1) < 0.0) b1 = -b1;

  std::array<Eigen::Matrix3d, 2> out;
  for (int sgn = 0; sgn < 2; ++sgn) {
    const double s = sgn == 0 ? 1.0 : -1.0;
    const Eigen::Vector3d c0(r22(0, 0), r22(1, 0), s * b0);
    const Eigen::Vector3d c1(r22(0, 1), r22(1, 1), s * b1);
    Eigen::Matrix3d r;
    r.col(0) = c0;
    r.col(1) = c1;
    r.col(2) = c0.cross(c1);
    out[sgn] = rv * r;
  }
  return out;
}

double reprojection_rms(const Pose6D& camera_from_tag, const Corners2& corners, double side_mm,
                        const CameraIntrinsics& k)
{
  const Corners3 model = tag_corners_local(side_mm);
  return std::sqrt(
      sum_sq_residual(camera_from_tag.rotation_matrix(), camera_from_tag.translation(), model, corners, k) / 4.0);
}

SingleTagEstimate estimate_single_tag(const Detection& det, const TagPlacement& placement, const CameraIntrinsics& k)
{
  if (!(placement.side_mm > 0.0)) throw std::invalid_argument("tag side length must be positive");
  if (!is_strictly_convex(det.corners)) throw EstimationFailed("tag quadrilateral is not strictly convex");

  Corners2 normalized;
  for (int i = 0; i < 4; ++i) normalized[i] = k.normalize(det.corners[i]);
  const Eigen::Matrix3d h = tag_homography(normalized, placement.side_mm);
  const Corners3 model = tag_corners_local(placement.side_mm);

  struct Candidate {
    Pose6D pose;
    double rms;
    double angle;
  };
  std::vector<Candidate> candidates;
  for (Eigen::Matrix3d r : planar_rotation_candidates(h)) {
    if (!r.allFinite()) continue;
    Eigen::Vector3d t = solve_translation(r, model, normalized);
    if (!t.allFinite()) continue;
    refine(r, t, model, det.corners, k);
    // Re-orthonormalize through the quaternion before judging the candidate.
    const Pose6D pose(r, t);
    const double cost = sum_sq_residual(pose.rotation_matrix(), pose.translation(), model, det.corners, k);
    if (!std::isfinite(cost)) continue;
    double angle = 0.0;
    try {
      angle = view_angle(pose);
    } catch (const std::domain_error&) {
      continue;
    }
    candidates.push_back({pose, std::sqrt(cost / 4.0), angle});
  }
  if (candidates.empty()) throw EstimationFailed("no pose places the tag in front of the camera");

  SingleTagEstimate out;
  if (candidates.size() == 1) {
    out.camera_from_tag = candidates[0].pose;
    out.rms_px = candidates[0].rms;
    out.alternative = candidates[0].pose;
    out.alternative_rms_px = candidates[0].rms;
    return out;
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) { return a.rms < b.rms; });
  const Candidate& best = candidates[0];
  const Candidate& second = candidates[1];
  const bool same = pose_error(best.pose, second.pose).rotation_rad < 1e-6;
  const bool close = second.rms - best.rms <= kAmbiguityBand * second.rms;
  if (!same && close) {
    const Candidate& frontal = best.angle <= second.angle ? best : second;
    const Candidate& other = best.angle <= second.angle ? second : best;
    out.camera_from_tag = frontal.pose;
    out.rms_px = frontal.rms;
    out.alternative = other.pose;
    out.alternative_rms_px = other.rms;
    out.ambiguous = true;
  } else {
    out.camera_from_tag = best.pose;
    out.rms_px = best.rms;
    out.alternative = second.pose;
    out.alternative_rms_px = second.rms;
  }
  return out;
}

}  // namespace at3d
