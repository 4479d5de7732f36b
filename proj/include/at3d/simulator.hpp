#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "at3d/bundle.hpp"
#include "at3d/camera.hpp"
#include "at3d/noise.hpp"
#include "at3d/occlusion.hpp"
#include "at3d/single_tag.hpp"

namespace at3d {

enum class ReflectionKind { scattered, specular };

struct ReflectionEvent {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  long frame_index = 0;
  ReflectionKind kind = ReflectionKind::scattered;
  int source_tag_id = -1;  ///< tag whose surface produced a specular glint
};

struct SimFrame {
  std::vector<Detection> detections;
  std::vector<ReflectionEvent> reflections;
  Pose6D truth_camera_from_bundle;  ///< after wave perturbation
  std::vector<int> in_view;         ///< tags fully projected inside the image before occlusion
};

/// Wave roll/pitch (deg) of one hull at time t.
struct WaveAttitude {
  double roll_deg = 0.0;
  double pitch_deg = 0.0;
};

/// Phase offsets are derived from (seed, stream, hull) so that the tag
/// carrier and camera boat oscillate independently.
WaveAttitude wave_attitude(const NoiseProfile& np, std::uint64_t stream, int hull, double t_s);

inline constexpr int kCameraHull = 0;
inline constexpr int kCarrierHull = 1;

/// Renders one frame of detections from the nominal (wave-free) pose.
///
/// Deterministic given (profile seed, stream, frame). Corner jitter uses a
/// per-(frame, tag id) stream; reflections a per-frame stream. `stream`
/// separates independent observers sharing one profile.
SimFrame simulate_frame(const Pose6D& truth_camera_from_bundle, const BundleGeometry& bundle,
                        const CameraIntrinsics& k, const NoiseProfile& np, long frame, std::uint64_t stream = 0);

/// Drops tags occluded by any of `reflections` (or displaces corners inside
/// a disk when `np.corrupt_instead_of_kill` is set).
std::vector<Detection> apply_reflections(std::span<const Detection> dets, std::span<const ReflectionEvent> reflections,
                                         const NoiseProfile& np, std::uint64_t stream = 0);

enum class RateMode { single, bundle };

/// Fraction of frames where the leader (single) or any tag (bundle) is
/// detected. Throws std::invalid_argument for an empty input.
double detection_rate(std::span<const std::vector<Detection>> frames, RateMode mode, int leader_tag_id);

}  // namespace at3d
