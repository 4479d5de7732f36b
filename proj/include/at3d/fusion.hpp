#pragma once

#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "at3d/bundle.hpp"
#include "at3d/pose.hpp"

namespace at3d {

/// A per-tag pose estimate with its confidence.
struct WeightedPose {
  Pose6D camera_from_tag;
  double w_dist = 1.0;
  double w_angle = 1.0;
  double weight = 1.0;  ///< w_dist * w_angle
  int source_tag_id = 0;
};

/// Builds a WeightedPose with weight = w_dist * w_angle. Throws
/// std::invalid_argument when either factor is outside (0, 1].
WeightedPose make_weighted_pose(const Pose6D& camera_from_tag, double w_dist, double w_angle, int source_tag_id);

enum class FusionMode {
  weighted,  ///< confidence-weighted mean of all estimates
  argmax,    ///< keep only the heaviest estimate
};

FusionMode parse_fusion_mode(std::string_view name);
std::string_view to_string(FusionMode mode);

struct FusedPose {
  Pose6D camera_from_bundle;
  double confidence = 0.0;
};

/// Re-expresses a tag estimate as camera_from_bundle via the tag's placement.
Pose6D to_bundle_frame(const Pose6D& camera_from_tag, const TagPlacement& placement);

/// Weighted average of unit quaternions: principal eigenvector of
/// sum w_i q_i q_i^T. Signs are aligned to the first quaternion before
/// accumulation and the result is returned in the same hemisphere.
Eigen::Quaterniond weighted_quaternion_mean(std::span<const Eigen::Quaterniond> rotations,
                                            std::span<const double> weights);

/// Confidence-weighted fusion of tag estimates into one bundle pose.
///
/// Each estimate is mapped into the bundle frame first. Translation is the
/// weight-normalized mean, rotation the weighted quaternion mean, and the
/// confidence is the weight sum clamped to [0, 1]. A single estimate is
/// returned as-is (re-expressed). Returns nullopt for an empty list or a
/// weight sum below 1e-12; throws std::invalid_argument for an estimate
/// whose tag is not in `bundle`.
std::optional<FusedPose> fuse(std::span<const WeightedPose> estimates, const BundleGeometry& bundle,
                              FusionMode mode = FusionMode::weighted);

}  // namespace at3d
