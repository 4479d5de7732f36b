#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "at3d/bundle.hpp"
#include "at3d/bundle_estimator.hpp"
#include "at3d/episode.hpp"
#include "at3d/experiment.hpp"
#include "at3d/noise.hpp"
#include "at3d/single_tag.hpp"

namespace at3d {

using Json = nlohmann::ordered_json;

Json to_json(const Pose6D& pose);
Pose6D pose_from_json(const Json& j);

/// {placements:[{tag_id, side_mm, pose:{t, q}, role}], g_deg, hinge}
Json to_json(const BundleGeometry& bundle);
BundleGeometry bundle_from_json(const Json& j);

Json to_json(const NoiseProfile& np);
NoiseProfile profile_from_json(const Json& j);

Json to_json(const CameraIntrinsics& k);
CameraIntrinsics camera_from_json(const Json& j);

Json to_json(const Report& report);
Report report_from_json(const Json& j);

/// Reads a JSON file; parse failures become ConfigError.
Json read_json_file(const std::filesystem::path& path);

/// Experiment config. String values for "noise_profile" and "bundle" are
/// file paths relative to `base_dir`. Throws ConfigError.
ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// One frame per line: {"frame": n, "detections": [{"tag_id", "corners": [[u, v] x4]}]}.
void write_detections_jsonl(std::ostream& os, long frame, const std::vector<Detection>& dets);
std::vector<std::pair<long, std::vector<Detection>>> read_detections_jsonl(std::istream& is);

/// frame, n_tags, d_x_mm, d_y_mm, psi_deg, confidence, ambiguous_flag
void write_estimate_csv_header(std::ostream& os);
void write_estimate_csv_row(std::ostream& os, long frame, const std::optional<BundleEstimate>& est);

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);
void write_episode_csv(std::ostream& os, const Report& report);

/// {tick, robot, event, detail}
Json to_json(const SwarmEvent& ev);

}  // namespace at3d
