#include "at3d/boat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "at3d/pose.hpp"

namespace at3d {

BodyCommand saturate(const BodyCommand& cmd, const BoatLimits& limits)
{
  return {std::clamp(cmd.surge_mm_s, -limits.max_surge_mm_s, limits.max_surge_mm_s),
          std::clamp(cmd.sway_mm_s, -limits.max_sway_mm_s, limits.max_sway_mm_s),
          std::clamp(cmd.yaw_rate_deg_s, -limits.max_yaw_rate_deg_s, limits.max_yaw_rate_deg_s)};
}

BoatState step_boat(const BoatState& state, const BodyCommand& cmd, double dt_s, const BoatLimits& limits)
{
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be positive");
  const BodyCommand v = saturate(cmd, limits);
  const double mid = deg2rad(state.heading_deg + 0.5 * v.yaw_rate_deg_s * dt_s);
  const double c = std::cos(mid);
  const double s = std::sin(mid);

  BoatState next = state;
  next.position += dt_s * Eigen::Vector2d(c * v.surge_mm_s - s * v.sway_mm_s, s * v.surge_mm_s + c * v.sway_mm_s);
  next.heading_deg = wrap_deg(state.heading_deg + v.yaw_rate_deg_s * dt_s);
  next.velocity = v;
  return next;
}

}  // namespace at3d
