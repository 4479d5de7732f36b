#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "at3d/bundle.hpp"
#include "at3d/camera.hpp"
#include "at3d/fusion.hpp"
#include "at3d/median_filter.hpp"
#include "at3d/single_tag.hpp"
#include "at3d/weights.hpp"

namespace at3d {

enum class EstimatorKind {
  classic_single,  ///< leader tag only, no filtering, no fusion
  bundle3d,        ///< every tag, per-tag median filter, weighted fusion
};

EstimatorKind parse_estimator_kind(std::string_view name);
std::string_view to_string(EstimatorKind kind);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::bundle3d;
  FusionMode fusion = FusionMode::weighted;
  int window_capacity = kDefaultWindowCapacity;
  double d_ref_mm = kDefaultReferenceDistanceMm;
};

struct BundleEstimate {
  Pose6D camera_from_bundle;
  double confidence = 0.0;
  int n_tags = 0;
  bool ambiguous = false;
  std::vector<WeightedPose> per_tag;  ///< filtered, weighted, camera_from_tag
};

/// The full per-frame pipeline: single-tag pose per detection, per-tag
/// median filter, distance x angle weighting, fusion. Detections of tags
/// outside the bundle are ignored, as are tags whose pose cannot be
/// recovered. Returns nullopt when no tag was estimable.
std::optional<BundleEstimate> estimate_bundle(std::span<const Detection> dets, const BundleGeometry& bundle,
                                              const CameraIntrinsics& k, FilterWindow& win,
                                              const EstimatorConfig& config = {});

/// Leader-only estimate without filtering: the classic single-marker reading.
std::optional<BundleEstimate> estimate_classic(std::span<const Detection> dets, const BundleGeometry& bundle,
                                               const CameraIntrinsics& k, const EstimatorConfig& config = {});

/// Owns the filter window of one camera stream and dispatches on the
/// configured estimator kind.
class PoseEstimator {
 public:
  explicit PoseEstimator(EstimatorConfig config = {});

  std::optional<BundleEstimate> update(std::span<const Detection> dets, const BundleGeometry& bundle,
                                       const CameraIntrinsics& k);
  void reset() { window_.clear(); }
  const EstimatorConfig& config() const { return config_; }

 private:
  EstimatorConfig config_;
  FilterWindow window_;
};

}  // namespace at3d
