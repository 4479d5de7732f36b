#pragma once

#include "at3d/boat.hpp"
#include "at3d/bundle.hpp"

namespace at3d {

/// Proportional gains on the planar error. The camera looks along the
/// boat's surge axis, so d_x maps to surge, d_y (target to starboard) to
/// sway, and psi (minus the heading error) to yaw rate.
struct GuidanceGains {
  double k_x = 0.4;     ///< 1/s
  double k_y = 1.0;     ///< 1/s
  double k_psi = 0.8;   ///< 1/s
  double k_bearing = 1.0;  ///< 1/s, turns toward the tag to keep it in view
  double dx_standoff_mm = 0.0;
  double min_closing_mm_s = 60.0;  ///< surge floor while d_x is beyond the standoff
  BoatLimits limits;
};

/// Zero at (standoff, 0, 0). Each component drives its error toward zero:
/// surge = k_x (d_x - standoff), sway = -k_y d_y,
/// yaw rate = k_psi psi - k_bearing atan2(d_y, d_x), then saturated.
BodyCommand guidance(const PlanarPose& planar, const GuidanceGains& gains);

struct LatchThresholds {
  double dx_max_mm = 10.0;
  double dy_max_mm = 40.0;
  double yaw_max_deg = 27.5;

  static LatchThresholds indoor() { return {10.0, 40.0, 27.5}; }
  static LatchThresholds outdoor() { return {500.0, 40.0, 27.5}; }

  /// Throws std::invalid_argument unless every bound is positive.
  void validate() const;
};

/// d_x < dx_max and |d_y| < dy_max and |psi| < yaw_max.
bool check_latch(const PlanarPose& planar, const LatchThresholds& th);

}  // namespace at3d
