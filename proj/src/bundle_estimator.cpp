#include "at3d/bundle_estimator.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace at3d {
namespace {

std::optional<WeightedPose> weigh(const Pose6D& camera_from_tag, int tag_id, double d_ref_mm)
{
  double angle = 0.0;
  try {
    angle = view_angle(camera_from_tag);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
  const double w_dist = distance_weight(camera_from_tag.translation().norm(), d_ref_mm);
  return make_weighted_pose(camera_from_tag, w_dist, angle_weight(angle), tag_id);
}

}  // namespace

EstimatorKind parse_estimator_kind(std::string_view name)
{
  if (name == "classic_single") return EstimatorKind::classic_single;
  if (name == "bundle3d") return EstimatorKind::bundle3d;
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

std::string_view to_string(EstimatorKind kind)
{
  return kind == EstimatorKind::classic_single ? "classic_single" : "bundle3d";
}

std::optional<BundleEstimate> estimate_bundle(std::span<const Detection> dets, const BundleGeometry& bundle,
                                              const CameraIntrinsics& k, FilterWindow& win,
                                              const EstimatorConfig& config)
{
  BundleEstimate out;
  std::set<int> seen;
  for (const auto& det : dets) {
    const TagPlacement* placement = bundle.find(det.tag_id);
    if (placement == nullptr || !seen.insert(det.tag_id).second) continue;
    SingleTagEstimate single;
    try {
      single = estimate_single_tag(det, *placement, k);
    } catch (const EstimationFailed&) {
      continue;
    }
    const Pose6D filtered = win.push(det.tag_id, single.camera_from_tag);
    auto weighted = weigh(filtered, det.tag_id, config.d_ref_mm);
    if (!weighted) continue;
    out.per_tag.push_back(*weighted);
    out.ambiguous = out.ambiguous || single.ambiguous;
  }

  const auto fused = fuse(out.per_tag, bundle, config.fusion);
  if (!fused) return std::nullopt;
  out.camera_from_bundle = fused->camera_from_bundle;
  out.confidence = fused->confidence;
  out.n_tags = static_cast<int>(out.per_tag.size());
  return out;
}

std::optional<BundleEstimate> estimate_classic(std::span<const Detection> dets, const BundleGeometry& bundle,
                                               const CameraIntrinsics& k, const EstimatorConfig& config)
{
  const TagPlacement& leader = bundle.leader();
  for (const auto& det : dets) {
    if (det.tag_id != leader.tag_id) continue;
    SingleTagEstimate single;
    try {
      single = estimate_single_tag(det, leader, k);
    } catch (const EstimationFailed&) {
      return std::nullopt;
    }
    auto weighted = weigh(single.camera_from_tag, leader.tag_id, config.d_ref_mm);
    if (!weighted) return std::nullopt;
    BundleEstimate out;
    out.camera_from_bundle = to_bundle_frame(single.camera_from_tag, leader);
    out.confidence = weighted->weight;
    out.n_tags = 1;
    out.ambiguous = single.ambiguous;
    out.per_tag.push_back(*weighted);
    return out;
  }
  return std::nullopt;
}

PoseEstimator::PoseEstimator(EstimatorConfig config) : config_(config), window_(config.window_capacity) {}

std::optional<BundleEstimate> PoseEstimator::update(std::span<const Detection> dets, const BundleGeometry& bundle,
                                                    const CameraIntrinsics& k)
{
  if (config_.kind == EstimatorKind::classic_single) return estimate_classic(dets, bundle, k, config_);
  return estimate_bundle(dets, bundle, k, window_, config_);
}

}  // namespace at3d
