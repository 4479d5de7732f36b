#include "at3d/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace at3d {
namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed area of disk(origin, r) intersected with triangle (origin, a, b).
double disk_triangle_signed_area(double r, const Eigen::Vector2d& a, const Eigen::Vector2d& b)
{
  // Split segment a->b at its circle crossings; each piece is either fully
  // inside (triangle) or fully outside (circular sector).
  std::vector<double> cuts{0.0, 1.0};
  const Eigen::Vector2d d = b - a;
  const double qa = d.squaredNorm();
  if (qa > 0.0) {
    const double qb = 2.0 * a.dot(d);
    const double qc = a.squaredNorm() - r * r;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      for (double s : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
        if (s > 0.0 && s < 1.0) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Eigen::Vector2d p = a + cuts[i] * d;
    const Eigen::Vector2d q = a + cuts[i + 1] * d;
    const Eigen::Vector2d mid = 0.5 * (p + q);
    if (mid.squaredNorm() <= r * r) {
      area += 0.5 * cross2(p, q);
    } else {
      area += 0.5 * r * r * std::atan2(cross2(p, q), p.dot(q));
    }
  }
  return area;
}

}  // namespace

double polygon_area(std::span<const Eigen::Vector2d> poly)
{
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return std::abs(0.5 * a);
}

double disk_polygon_intersection_area(const Disk& disk, std::span<const Eigen::Vector2d> poly)
{
  if (disk.radius <= 0.0 || poly.size() < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    a += disk_triangle_signed_area(disk.radius, poly[i] - disk.center, poly[(i + 1) % poly.size()] - disk.center);
  return std::abs(a);
}

double coverage_fraction(const Disk& disk, std::span<const Eigen::Vector2d> poly)
{
  const double area = polygon_area(poly);
  if (!(area > 0.0)) return 0.0;
  return std::clamp(disk_polygon_intersection_area(disk, poly) / area, 0.0, 1.0);
}

bool occludes(const Disk& disk, std::span<const Eigen::Vector2d> corners, double kill_frac)
{
  for (const auto& c : corners)
    if ((c - disk.center).norm() < disk.radius) return true;
  return coverage_fraction(disk, corners) >= kill_frac - 1e-9;
}

}  // namespace at3d
