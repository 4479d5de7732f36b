#pragma once

#include <Eigen/Core>

namespace at3d {

/// Body-frame velocity command: surge forward, sway to port (left), yaw
/// rate counter-clockwise seen from above.
struct BodyCommand {
  double surge_mm_s = 0.0;
  double sway_mm_s = 0.0;
  double yaw_rate_deg_s = 0.0;
};

struct BoatLimits {
  double max_surge_mm_s = 300.0;
  double max_sway_mm_s = 200.0;
  double max_yaw_rate_deg_s = 30.0;
};

/// Boat pose on the water plane. `velocity` holds the body command applied
/// during the last step.
struct BoatState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();  ///< (W_x, W_y) mm
  double heading_deg = 0.0;                            ///< (-180, 180], about +Z from +W_x
  BodyCommand velocity;
};

BodyCommand saturate(const BodyCommand& cmd, const BoatLimits& limits);

/// First-order holonomic kinematics: the saturated command becomes the body
/// velocity, integrated over `dt_s` using the mid-step heading.
/// Throws std::invalid_argument unless dt_s > 0.
BoatState step_boat(const BoatState& state, const BodyCommand& cmd, double dt_s, const BoatLimits& limits = {});

}  // namespace at3d
