#include "at3d/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace at3d {
namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out)
{
  if (j.contains(key)) out = j.at(key).get<T>();
}

Eigen::Vector3d vec3(const Json& j)
{
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string fmt(double v, int decimals = 6)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

PlanarPose planar_from_json(const Json& j, PlanarPose p, const std::string& where)
{
  check_keys(j, {"d_x", "d_y", "psi"}, where);
  read_opt(j, "d_x", p.d_x);
  read_opt(j, "d_y", p.d_y);
  read_opt(j, "psi", p.psi);
  return p;
}

Json planar_json(const PlanarPose& p) { return Json{{"d_x", p.d_x}, {"d_y", p.d_y}, {"psi", p.psi}}; }

Json load_or_inline(const Json& j, const std::filesystem::path& base_dir)
{
  if (j.is_string()) return read_json_file(base_dir / j.get<std::string>());
  return j;
}

}  // namespace

Json to_json(const Pose6D& pose)
{
  const auto& t = pose.translation();
  const auto& q = pose.rotation();
  return Json{{"t", {t.x(), t.y(), t.z()}}, {"q", {q.w(), q.x(), q.y(), q.z()}}};
}

Pose6D pose_from_json(const Json& j)
{
  check_keys(j, {"t", "q"}, "pose");
  const Eigen::Vector3d t = vec3(j.at("t"));
  const Json& q = j.at("q");
  if (!q.is_array() || q.size() != 4) throw ConfigError("pose.q must hold [w, x, y, z]");
  const Eigen::Quaterniond rot(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
  if (!(rot.norm() > 0.0)) throw ConfigError("pose.q must be non-zero");
  return Pose6D(rot, t);
}

Json to_json(const BundleGeometry& bundle)
{
  Json placements = Json::array();
  for (const auto& p : bundle.placements)
    placements.push_back({{"tag_id", p.tag_id},
                          {"side_mm", p.side_mm},
                          {"pose", to_json(p.tag_to_bundle)},
                          {"role", p.role == TagRole::leader ? "leader" : "follower"}});
  const auto& h = bundle.hinge_axis;
  return Json{{"placements", placements}, {"g_deg", bundle.rotation_step_deg}, {"hinge", {h.x(), h.y(), h.z()}}};
}

BundleGeometry bundle_from_json(const Json& j)
{
  try {
    if (j.contains("build")) {
      check_keys(j, {"build"}, "bundle");
      const Json& b = j.at("build");
      check_keys(b, {"side_mm", "followers", "g_deg", "hinge_offset_mm", "first_tag_id"}, "bundle.build");
      return build_bundle(b.at("side_mm").get<double>(), b.value("followers", 1), b.value("g_deg", 10.0),
                          b.value("hinge_offset_mm", 0.0), b.value("first_tag_id", 0));
    }
    check_keys(j, {"placements", "g_deg", "hinge"}, "bundle");
    BundleGeometry out;
    for (const auto& p : j.at("placements")) {
      check_keys(p, {"tag_id", "side_mm", "pose", "role"}, "bundle.placements[]");
      TagPlacement tp;
      tp.tag_id = p.at("tag_id").get<int>();
      tp.side_mm = p.at("side_mm").get<double>();
      tp.tag_to_bundle = pose_from_json(p.at("pose"));
      const auto role = p.at("role").get<std::string>();
      if (role != "leader" && role != "follower") throw ConfigError("bundle role must be leader or follower");
      tp.role = role == "leader" ? TagRole::leader : TagRole::follower;
      out.placements.push_back(tp);
    }
    read_opt(j, "g_deg", out.rotation_step_deg);
    if (j.contains("hinge")) out.hinge_axis = vec3(j.at("hinge")).normalized();
    out.validate();
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bundle: ") + e.what());
  }
}

Json to_json(const NoiseProfile& np)
{
  Json lights = Json::array();
  for (const auto& l : np.lights) lights.push_back({{"azimuth_deg", l.azimuth_deg}, {"elevation_deg", l.elevation_deg}});
  return Json{{"label", np.label},
              {"pixel_sigma", np.pixel_sigma},
              {"reflection_rate", np.reflection_rate},
              {"reflection_radius_frac", np.reflection_radius_frac},
              {"occlusion_kill_frac", np.occlusion_kill_frac},
              {"corrupt_instead_of_kill", np.corrupt_instead_of_kill},
              {"wave_amplitude_deg", np.wave_amplitude_deg},
              {"wave_period_s", np.wave_period_s},
              {"wave_group_period_s", np.wave_group_period_s},
              {"wave_group_depth", np.wave_group_depth},
              {"lights", lights},
              {"glint_lobe_deg", np.glint_lobe_deg},
              {"glint_radius_frac", np.glint_radius_frac},
              {"target_drift_mm", np.target_drift_mm},
              {"target_drift_period_s", np.target_drift_period_s},
              {"frame_rate_hz", np.frame_rate_hz},
              {"seed", np.seed}};
}

NoiseProfile profile_from_json(const Json& j)
{
  try {
    check_keys(j, {"label", "description", "pixel_sigma", "reflection_rate", "reflection_radius_frac",
                   "occlusion_kill_frac", "corrupt_instead_of_kill", "wave_amplitude_deg", "wave_period_s",
                   "wave_group_period_s", "wave_group_depth", "lights", "glint_lobe_deg", "glint_radius_frac",
                   "target_drift_mm", "target_drift_period_s", "frame_rate_hz", "seed"},
               "noise_profile");
    NoiseProfile np;
    read_opt(j, "label", np.label);
    read_opt(j, "pixel_sigma", np.pixel_sigma);
    read_opt(j, "reflection_rate", np.reflection_rate);
    read_opt(j, "reflection_radius_frac", np.reflection_radius_frac);
    read_opt(j, "occlusion_kill_frac", np.occlusion_kill_frac);
    read_opt(j, "corrupt_instead_of_kill", np.corrupt_instead_of_kill);
    read_opt(j, "wave_amplitude_deg", np.wave_amplitude_deg);
    read_opt(j, "wave_period_s", np.wave_period_s);
    read_opt(j, "wave_group_period_s", np.wave_group_period_s);
    read_opt(j, "wave_group_depth", np.wave_group_depth);
    if (j.contains("lights")) {
      for (const auto& l : j.at("lights")) {
        check_keys(l, {"azimuth_deg", "elevation_deg"}, "noise_profile.lights[]");
        np.lights.push_back({l.value("azimuth_deg", 0.0), l.value("elevation_deg", 0.0)});
      }
    }
    read_opt(j, "glint_lobe_deg", np.glint_lobe_deg);
    read_opt(j, "glint_radius_frac", np.glint_radius_frac);
    read_opt(j, "target_drift_mm", np.target_drift_mm);
    read_opt(j, "target_drift_period_s", np.target_drift_period_s);
    read_opt(j, "frame_rate_hz", np.frame_rate_hz);
    read_opt(j, "seed", np.seed);
    np.validate();
    return np;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("noise_profile: ") + e.what());
  }
}

Json to_json(const CameraIntrinsics& k)
{
  return Json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
}

CameraIntrinsics camera_from_json(const Json& j)
{
  try {
    check_keys(j, {"fx", "fy", "cx", "cy", "width", "height"}, "camera");
    CameraIntrinsics k;
    read_opt(j, "fx", k.fx);
    read_opt(j, "fy", k.fy);
    read_opt(j, "cx", k.cx);
    read_opt(j, "cy", k.cy);
    read_opt(j, "width", k.width);
    read_opt(j, "height", k.height);
    k.validate();
    return k;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("camera: ") + e.what());
  }
}

Json to_json(const Report& r)
{
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr{{"episode", row.episode},
            {"start", planar_json(row.start)},
            {"detection_pct", row.detection_pct},
            {"yaw_samples", row.yaw_samples},
            {"yaw_rmse_deg", row.yaw_rmse_deg},
            {"yaw_max_abs_deg", row.yaw_max_abs_deg},
            {"success", row.success},
            {"attempts", row.attempts},
            {"ticks", row.ticks}};
    if (!row.error.empty()) jr["error"] = row.error;
    rows.push_back(jr);
  }
  return Json{{"scenario", r.scenario},
              {"estimator", r.estimator},
              {"profile", r.profile},
              {"seed", r.seed},
              {"episodes", r.episodes},
              {"frames", r.frames},
              {"detection_pct", r.detection_pct},
              {"yaw_rmse_deg", r.yaw_rmse_deg},
              {"yaw_max_abs_deg", r.yaw_max_abs_deg},
              {"success_rate", r.success_rate},
              {"mean_attempts", r.mean_attempts},
              {"rows", rows}};
}

Report report_from_json(const Json& j)
{
  try {
    Report r;
    r.scenario = j.at("scenario").get<std::string>();
    r.estimator = j.at("estimator").get<std::string>();
    r.profile = j.value("profile", "");
    r.seed = j.value("seed", std::uint64_t{0});
    r.episodes = j.value("episodes", 0);
    r.frames = j.value("frames", 0L);
    r.detection_pct = j.at("detection_pct").get<double>();
    r.yaw_rmse_deg = j.at("yaw_rmse_deg").get<double>();
    r.yaw_max_abs_deg = j.at("yaw_max_abs_deg").get<double>();
    r.success_rate = j.at("success_rate").get<double>();
    r.mean_attempts = j.at("mean_attempts").get<double>();
    if (j.contains("rows")) {
      for (const auto& jr : j.at("rows")) {
        EpisodeRow row;
        row.episode = jr.value("episode", 0);
        if (jr.contains("start")) row.start = planar_from_json(jr.at("start"), {}, "report.rows[].start");
        row.detection_pct = jr.value("detection_pct", 0.0);
        row.yaw_samples = jr.value("yaw_samples", 0L);
        row.yaw_rmse_deg = jr.value("yaw_rmse_deg", 0.0);
        row.yaw_max_abs_deg = jr.value("yaw_max_abs_deg", 0.0);
        row.success = jr.value("success", false);
        row.attempts = jr.value("attempts", 0);
        row.ticks = jr.value("ticks", 0L);
        row.error = jr.value("error", "");
        r.rows.push_back(row);
      }
    }
    return r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir)
{
  try {
    check_keys(j,
               {"description", "scenario", "estimator", "fusion", "window", "d_ref_mm", "episodes",
                "frames_per_episode", "seed", "noise_profile", "bundle", "camera", "latch", "start", "start_jitter",
                "swarm"},
               "experiment");
    ExperimentConfig c;
    c.scenario = parse_scenario(j.at("scenario").get<std::string>());
    c.latch = default_latch(c.scenario);
    c.estimator.kind = parse_estimator_kind(j.at("estimator").get<std::string>());
    if (j.contains("fusion")) c.estimator.fusion = parse_fusion_mode(j.at("fusion").get<std::string>());
    read_opt(j, "window", c.estimator.window_capacity);
    read_opt(j, "d_ref_mm", c.estimator.d_ref_mm);
    read_opt(j, "episodes", c.episodes);
    read_opt(j, "frames_per_episode", c.frames_per_episode);
    read_opt(j, "seed", c.seed);
    if (j.contains("noise_profile")) c.noise = profile_from_json(load_or_inline(j.at("noise_profile"), base_dir));
    if (j.contains("bundle")) c.bundle = bundle_from_json(load_or_inline(j.at("bundle"), base_dir));
    if (j.contains("camera")) c.camera = camera_from_json(j.at("camera"));
    if (j.contains("start")) c.start = planar_from_json(j.at("start"), c.start, "start");
    if (j.contains("start_jitter")) c.start_jitter = planar_from_json(j.at("start_jitter"), c.start_jitter, "start_jitter");

    if (j.contains("latch")) {
      const Json& l = j.at("latch");
      check_keys(l,
                 {"thresholds", "gains", "tick_hz", "no_pose_timeout_s", "coast_distance_mm", "align_fraction", "max_attempt_s",
                  "waypoint_noise_mm", "recovery_speed_mm_s", "max_attempts"},
                 "latch");
      if (l.contains("thresholds")) {
        const Json& t = l.at("thresholds");
        if (t.is_string()) {
          const auto name = t.get<std::string>();
          if (name == "indoor") c.latch.thresholds = LatchThresholds::indoor();
          else if (name == "outdoor") c.latch.thresholds = LatchThresholds::outdoor();
          else throw ConfigError("latch.thresholds: expected indoor, outdoor or an object");
        } else {
          check_keys(t, {"dx_max_mm", "dy_max_mm", "yaw_max_deg"}, "latch.thresholds");
          read_opt(t, "dx_max_mm", c.latch.thresholds.dx_max_mm);
          read_opt(t, "dy_max_mm", c.latch.thresholds.dy_max_mm);
          read_opt(t, "yaw_max_deg", c.latch.thresholds.yaw_max_deg);
        }
      }
      if (l.contains("gains")) {
        const Json& g = l.at("gains");
        check_keys(g,
                   {"k_x", "k_y", "k_psi", "k_bearing", "dx_standoff_mm", "min_closing_mm_s", "max_surge_mm_s", "max_sway_mm_s",
                    "max_yaw_rate_deg_s"},
                   "latch.gains");
        auto& gg = c.latch.gains;
        read_opt(g, "k_x", gg.k_x);
        read_opt(g, "k_y", gg.k_y);
        read_opt(g, "k_psi", gg.k_psi);
        read_opt(g, "k_bearing", gg.k_bearing);
        read_opt(g, "dx_standoff_mm", gg.dx_standoff_mm);
        read_opt(g, "min_closing_mm_s", gg.min_closing_mm_s);
        read_opt(g, "max_surge_mm_s", gg.limits.max_surge_mm_s);
        read_opt(g, "max_sway_mm_s", gg.limits.max_sway_mm_s);
        read_opt(g, "max_yaw_rate_deg_s", gg.limits.max_yaw_rate_deg_s);
      }
      read_opt(l, "tick_hz", c.latch.tick_hz);
      read_opt(l, "no_pose_timeout_s", c.latch.no_pose_timeout_s);
      read_opt(l, "coast_distance_mm", c.latch.coast_distance_mm);
      read_opt(l, "align_fraction", c.latch.align_fraction);
      read_opt(l, "max_attempt_s", c.latch.max_attempt_s);
      read_opt(l, "waypoint_noise_mm", c.latch.waypoint_noise_mm);
      read_opt(l, "recovery_speed_mm_s", c.latch.recovery_speed_mm_s);
      read_opt(l, "max_attempts", c.latch.max_attempts);
    }

    if (j.contains("swarm")) {
      const Json& s = j.at("swarm");
      check_keys(s, {"robots", "spacing_mm", "max_ticks", "command_tick", "codebook", "formation"}, "swarm");
      read_opt(s, "robots", c.swarm_robots);
      read_opt(s, "spacing_mm", c.swarm_spacing_mm);
      read_opt(s, "max_ticks", c.swarm_max_ticks);
      read_opt(s, "command_tick", c.swarm_command_tick);
      if (s.contains("formation") && s.at("formation").get<std::string>() != "train_link")
        throw ConfigError("swarm.formation: only train_link is supported");
      if (s.contains("codebook")) {
        TagCodebook cb;
        for (const auto& [tag, msg] : s.at("codebook").items()) {
          try {
            cb.add(std::stoi(tag), msg.get<std::string>());
          } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("swarm.codebook: ") + e.what());
          }
        }
        c.codebook = cb;
      }
    }
    c.validate();
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
}

ExperimentConfig load_experiment(const std::filesystem::path& path)
{
  return experiment_from_json(read_json_file(path), path.parent_path());
}

void write_detections_jsonl(std::ostream& os, long frame, const std::vector<Detection>& dets)
{
  Json jd = Json::array();
  for (const auto& d : dets) {
    Json corners = Json::array();
    for (const auto& c : d.corners) corners.push_back({c.x(), c.y()});
    jd.push_back({{"tag_id", d.tag_id}, {"corners", corners}});
  }
  os << Json{{"frame", frame}, {"detections", jd}}.dump() << '\n';
}

std::vector<std::pair<long, std::vector<Detection>>> read_detections_jsonl(std::istream& is)
{
  std::vector<std::pair<long, std::vector<Detection>>> out;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      const long frame = j.at("frame").get<long>();
      std::vector<Detection> dets;
      for (const auto& jd : j.at("detections")) {
        Detection d;
        d.tag_id = jd.at("tag_id").get<int>();
        d.frame_index = frame;
        const Json& c = jd.at("corners");
        if (!c.is_array() || c.size() != 4) throw ConfigError("a detection needs 4 corners");
        for (int i = 0; i < 4; ++i) d.corners[i] = Eigen::Vector2d(c[i].at(0).get<double>(), c[i].at(1).get<double>());
        dets.push_back(d);
      }
      out.emplace_back(frame, std::move(dets));
    } catch (const std::exception& e) {
      throw ConfigError("detections line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_estimate_csv_header(std::ostream& os)
{
  os << "frame,n_tags,d_x_mm,d_y_mm,psi_deg,confidence,ambiguous_flag\n";
}

void write_estimate_csv_row(std::ostream& os, long frame, const std::optional<BundleEstimate>& est)
{
  if (!est) {
    os << frame << ",0,,,,0,0\n";
    return;
  }
  const PlanarPose p = to_planar(est->camera_from_bundle);
  os << frame << ',' << est->n_tags << ',' << fmt(p.d_x) << ',' << fmt(p.d_y) << ',' << fmt(p.psi) << ','
     << fmt(est->confidence) << ',' << (est->ambiguous ? 1 : 0) << '\n';
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows)
{
  os << "tick,attempt,truth_d_x_mm,truth_d_y_mm,truth_psi_deg,has_estimate,est_d_x_mm,est_d_y_mm,est_psi_deg,"
        "surge_mm_s,sway_mm_s,yaw_rate_deg_s\n";
  for (const auto& r : rows) {
    os << r.tick << ',' << r.attempt << ',' << fmt(r.truth.d_x) << ',' << fmt(r.truth.d_y) << ',' << fmt(r.truth.psi)
       << ',' << (r.has_estimate ? 1 : 0) << ',';
    if (r.has_estimate) os << fmt(r.estimate.d_x) << ',' << fmt(r.estimate.d_y) << ',' << fmt(r.estimate.psi);
    else os << ",,";
    os << ',' << fmt(r.command.surge_mm_s) << ',' << fmt(r.command.sway_mm_s) << ',' << fmt(r.command.yaw_rate_deg_s)
       << '\n';
  }
}

void write_episode_csv(std::ostream& os, const Report& report)
{
  os << "episode,start_d_x_mm,start_d_y_mm,start_psi_deg,detection_pct,yaw_samples,yaw_rmse_deg,yaw_max_abs_deg,"
        "success,attempts,ticks,error\n";
  for (const auto& r : report.rows) {
    os << r.episode << ',' << fmt(r.start.d_x) << ',' << fmt(r.start.d_y) << ',' << fmt(r.start.psi) << ','
       << fmt(r.detection_pct) << ',' << r.yaw_samples << ',' << fmt(r.yaw_rmse_deg) << ',' << fmt(r.yaw_max_abs_deg)
       << ',' << (r.success ? 1 : 0) << ',' << r.attempts << ',' << r.ticks << ',' << '"' << r.error << '"' << '\n';
  }
}

Json to_json(const SwarmEvent& ev)
{
  return Json{{"tick", ev.tick}, {"robot", ev.robot}, {"event", to_string(ev.kind)}, {"detail", ev.detail}};
}

}  // namespace at3d
