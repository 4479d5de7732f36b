#pragma once

namespace at3d {

constexpr double kDefaultReferenceDistanceMm = 1000.0;

/// Confidence from camera-tag distance: min(1, d_ref / d). Nearer tags weigh more.
/// Throws std::invalid_argument for non-positive inputs.
double distance_weight(double d_mm, double d_ref_mm = kDefaultReferenceDistanceMm);

/// Confidence from viewing angle: cos^2(view). Frontal tags weigh more.
/// Throws std::invalid_argument outside [0, 90).
double angle_weight(double view_deg);

}  // namespace at3d
