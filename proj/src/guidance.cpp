#include "at3d/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace at3d {

BodyCommand guidance(const PlanarPose& planar, const GuidanceGains& gains)
{
  const double dx_err = planar.d_x - gains.dx_standoff_mm;
  double surge = gains.k_x * dx_err;
  if (dx_err > 0.0) surge = std::max(surge, gains.min_closing_mm_s);
  const double bearing_deg = rad2deg(std::atan2(planar.d_y, planar.d_x));
  return saturate({surge, -gains.k_y * planar.d_y, gains.k_psi * planar.psi - gains.k_bearing * bearing_deg},
                  gains.limits);
}

void LatchThresholds::validate() const
{
  if (!(dx_max_mm > 0.0 && dy_max_mm > 0.0 && yaw_max_deg > 0.0))
    throw std::invalid_argument("latch thresholds must be positive");
}

bool check_latch(const PlanarPose& planar, const LatchThresholds& th)
{
  return planar.d_x < th.dx_max_mm && std::abs(planar.d_y) < th.dy_max_mm && std::abs(planar.psi) < th.yaw_max_deg;
}

}  // namespace at3d
