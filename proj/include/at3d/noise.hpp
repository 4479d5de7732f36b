#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace at3d {

/// Direction from the scene towards a light source, in the frame of the
/// tag-carrying boat (x forward, y left, z up). Tags face aft (-x).
struct LightSource {
  double azimuth_deg = 0.0;    ///< about +z from +x
  double elevation_deg = 0.0;  ///< above the water plane
};

/// Scene noise model: corner jitter, uniformly scattered reflection disks,
/// specular glints from fixed lights, and wave-induced roll/pitch.
struct NoiseProfile {
  std::string label;
  double pixel_sigma = 0.0;             ///< px, i.i.d. per corner coordinate
  double reflection_rate = 0.0;         ///< Poisson mean of random disks per frame
  double reflection_radius_frac = 0.0;  ///< disk radius / mean tag image diagonal
  double occlusion_kill_frac = 0.25;    ///< covered area fraction that kills a tag
  bool corrupt_instead_of_kill = false; ///< displace corners inside disks instead of dropping the tag

  double wave_amplitude_deg = 0.0;
  double wave_period_s = 4.0;
  double wave_group_period_s = 0.0;  ///< amplitude envelope period; 0 disables
  double wave_group_depth = 0.0;     ///< envelope modulation depth in [0, 1)

  std::vector<LightSource> lights;
  double glint_lobe_deg = 0.0;    ///< max angle between mirror direction and light
  double glint_radius_frac = 0.25;

  double target_drift_mm = 0.0;  ///< station-keeping wander of the tag carrier
  double target_drift_period_s = 20.0;

  double frame_rate_hz = 30.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on negative rates/sigmas or a kill
  /// fraction outside (0, 1].
  void validate() const;
};

}  // namespace at3d
