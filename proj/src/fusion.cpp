#include "at3d/fusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace at3d {

WeightedPose make_weighted_pose(const Pose6D& camera_from_tag, double w_dist, double w_angle, int source_tag_id)
{
  if (!(w_dist > 0.0 && w_dist <= 1.0) || !(w_angle > 0.0 && w_angle <= 1.0))
    throw std::invalid_argument("weights must lie in (0, 1]");
  return {camera_from_tag, w_dist, w_angle, w_dist * w_angle, source_tag_id};
}

FusionMode parse_fusion_mode(std::string_view name)
{
  if (name == "weighted") return FusionMode::weighted;
  if (name == "argmax") return FusionMode::argmax;
  throw std::invalid_argument("unknown fusion mode: " + std::string(name));
}

std::string_view to_string(FusionMode mode)
{
  return mode == FusionMode::weighted ? "weighted" : "argmax";
}

Pose6D to_bundle_frame(const Pose6D& camera_from_tag, const TagPlacement& placement)
{
  return camera_from_tag * placement.tag_to_bundle.inverse();
}

Eigen::Quaterniond weighted_quaternion_mean(std::span<const Eigen::Quaterniond> rotations,
                                            std::span<const double> weights)
{
  if (rotations.empty() || rotations.size() != weights.size())
    throw std::invalid_argument("quaternion mean needs matching non-empty inputs");
  const Eigen::Vector4d ref = rotations[0].coeffs();
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    Eigen::Vector4d q = rotations[i].normalized().coeffs();
    if (q.dot(ref) < 0.0) q = -q;
    acc += weights[i] * q * q.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(acc);
  Eigen::Vector4d best = eig.eigenvectors().col(3);
  if (best.dot(ref) < 0.0) best = -best;
  return Eigen::Quaterniond(best(3), best(0), best(1), best(2)).normalized();
}

std::optional<FusedPose> fuse(std::span<const WeightedPose> estimates, const BundleGeometry& bundle, FusionMode mode)
{
  if (estimates.empty()) return std::nullopt;

  std::vector<Pose6D> in_bundle;
  std::vector<double> weights;
  in_bundle.reserve(estimates.size());
  for (const auto& e : estimates) {
    const TagPlacement* placement = bundle.find(e.source_tag_id);
    if (placement == nullptr) throw std::invalid_argument("estimate refers to a tag outside the bundle");
    in_bundle.push_back(to_bundle_frame(e.camera_from_tag, *placement));
    weights.push_back(e.weight);
  }

  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total >= 1e-12)) return std::nullopt;
  const double confidence = std::clamp(total, 0.0, 1.0);

  if (estimates.size() == 1) return FusedPose{in_bundle[0], confidence};

  if (mode == FusionMode::argmax) {
    const auto heaviest = std::max_element(weights.begin(), weights.end()) - weights.begin();
    return FusedPose{in_bundle[static_cast<std::size_t>(heaviest)], confidence};
  }

  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  std::vector<Eigen::Quaterniond> rotations;
  for (std::size_t i = 0; i < in_bundle.size(); ++i) {
    t += weights[i] * in_bundle[i].translation();
    rotations.push_back(in_bundle[i].rotation());
  }
  t /= total;
  return FusedPose{Pose6D(weighted_quaternion_mean(rotations, weights), t), confidence};
}

}  // namespace at3d
