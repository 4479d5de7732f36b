#pragma once

#include <span>

#include <Eigen/Core>

namespace at3d {

struct Disk {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
};

/// Shoelace area of a simple polygon (absolute value).
double polygon_area(std::span<const Eigen::Vector2d> polygon);

/// Exact area of the intersection of a disk and a convex polygon given in
/// either winding.
double disk_polygon_intersection_area(const Disk& disk, std::span<const Eigen::Vector2d> polygon);

/// Fraction of the polygon's area covered by the disk, in [0, 1].
double coverage_fraction(const Disk& disk, std::span<const Eigen::Vector2d> polygon);

/// A reflection disables a tag when it covers at least `kill_frac` of the
/// tag's projected area or contains any of its corners.
bool occludes(const Disk& disk, std::span<const Eigen::Vector2d> corners, double kill_frac);

}  // namespace at3d
