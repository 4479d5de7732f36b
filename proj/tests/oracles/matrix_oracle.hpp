#pragma once

// Plain row-major 4x4 homogeneous transforms, independent of Eigen's
// geometry module, used to cross-check frame composition.

#include <array>

namespace oracle {

using Mat4 = std::array<double, 16>;
using Vec3 = std::array<double, 3>;

Mat4 identity();
Mat4 translation(double x, double y, double z);
/// Rotation by `deg` about a (not necessarily unit) axis, Rodrigues formula.
Mat4 rotation(Vec3 axis, double deg);
Mat4 multiply(const Mat4& a, const Mat4& b);
Vec3 apply(const Mat4& m, const Vec3& p);
Mat4 rigid_inverse(const Mat4& m);

/// Corner k of a square tag of side l in its own frame, CCW from bottom-left.
Vec3 square_corner(double side, int k);

/// bundle_from_tag of follower k (k >= 1) in the edge-chained layout:
/// each follower hangs off the right edge of the previous tag, `gap` beyond
/// the hinge, rotated by a further g degrees about the vertical axis.
Mat4 follower_transform(double side, double g_deg, double gap, int k);

}  // namespace oracle
