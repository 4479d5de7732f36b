#include "at3d/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "at3d/pose.hpp"

namespace at3d {

double distance_weight(double d_mm, double d_ref_mm)
{
  if (!(d_mm > 0.0) || !(d_ref_mm > 0.0)) throw std::invalid_argument("distances must be positive");
  return std::min(1.0, d_ref_mm / d_mm);
}

double angle_weight(double view_deg)
{
  if (!(view_deg >= 0.0 && view_deg < 90.0)) throw std::invalid_argument("view angle must lie in [0, 90)");
  const double c = std::cos(deg2rad(view_deg));
  return c * c;
}

}  // namespace at3d
