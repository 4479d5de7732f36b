#include "at3d/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "at3d/rng.hpp"
#include "at3d/simulator.hpp"

namespace at3d {
namespace {

constexpr std::uint64_t kStartStream = 0x53545254;  // "STRT"

struct EpisodeOutcome {
  EpisodeRow row;
  double yaw_sq_sum = 0.0;
  long detected_frames = 0;
  std::vector<TraceRow> trace;
};

struct YawStats {
  long n = 0;
  double sq = 0.0;
  double max_abs = 0.0;
  void add(double err)
  {
    ++n;
    sq += err * err;
    max_abs = std::max(max_abs, std::abs(err));
  }
};

std::string cell(double v, int decimals)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width)
{
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width)
{
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

/// Static measurement block: the camera holds `start` while the scene
/// noise plays out; feeds the detection and yaw statistics.
YawStats measure(const ExperimentConfig& c, const NoiseProfile& np, const PlanarPose& start, std::uint64_t stream,
                 double& detection_pct)
{
  const Pose6D nominal = camera_from_planar(start);
  PoseEstimator estimator(c.estimator);
  std::vector<std::vector<Detection>> frames;
  YawStats yaw;
  for (long f = 0; f < c.frames_per_episode; ++f) {
    SimFrame sim = simulate_frame(nominal, c.bundle, c.camera, np, f, stream);
    if (auto est = estimator.update(sim.detections, c.bundle, c.camera))
      yaw.add(wrap_deg(to_planar(est->camera_from_bundle).psi - to_planar(sim.truth_camera_from_bundle).psi));
    frames.push_back(std::move(sim.detections));
  }
  const RateMode mode = c.estimator.kind == EstimatorKind::classic_single ? RateMode::single : RateMode::bundle;
  detection_pct = 100.0 * detection_rate(frames, mode, c.bundle.leader().tag_id);
  return yaw;
}

EpisodeOutcome run_one(const ExperimentConfig& c, int episode, bool traces)
{
  EpisodeOutcome out;
  out.row.episode = episode;
  try {
    NoiseProfile np = c.noise;
    np.seed = c.seed;
    const auto stream = static_cast<std::uint64_t>(episode);

    if (c.scenario == Scenario::swarm_train) {
      // Measurement: robot 2 at rest behind the leader.
      out.row.start = {c.swarm_spacing_mm, 0.0, 0.0};
      const YawStats yaw = measure(c, np, out.row.start, stream, out.row.detection_pct);
      out.yaw_sq_sum = yaw.sq;
      out.row.yaw_samples = yaw.n;
      out.row.yaw_max_abs_deg = yaw.max_abs;

      ScenarioOptions opt;
      opt.robots = c.swarm_robots;
      opt.spacing_mm = c.swarm_spacing_mm;
      opt.bundle = c.bundle;
      opt.camera = c.camera;
      opt.noise = np;
      opt.noise.seed = mix64(c.seed ^ mix64(stream));
      opt.estimator = c.estimator;
      opt.latch = c.latch;
      opt.codebook = c.codebook;
      opt.command_tick = c.swarm_command_tick;
      FormationScenario sc = make_train_link(opt);
      const auto done = run_formation(sc, c.swarm_max_ticks);
      out.row.success = done.has_value();
      out.row.ticks = sc.tick;
      int attempts = 0;
      for (std::size_t i = 1; i < sc.robots.size(); ++i)
        attempts = std::max(attempts, sc.robots[i].latch ? sc.robots[i].latch->attempts() : 0);
      out.row.attempts = attempts;
    } else {
      out.row.start = episode_start(c, episode);
      const YawStats yaw = measure(c, np, out.row.start, stream, out.row.detection_pct);
      out.yaw_sq_sum = yaw.sq;
      out.row.yaw_samples = yaw.n;
      out.row.yaw_max_abs_deg = yaw.max_abs;

      EpisodeSetup setup;
      setup.bundle = c.bundle;
      setup.camera = c.camera;
      setup.noise = np;
      setup.estimator = c.estimator;
      setup.latch = c.latch;
      setup.start = out.row.start;
      setup.stream = stream;
      setup.first_frame = c.frames_per_episode;
      EpisodeResult r = run_episode(setup, traces);
      out.row.success = r.success;
      out.row.attempts = r.attempts;
      out.row.ticks = r.frames;
      out.trace = std::move(r.trace);
    }
    out.row.yaw_rmse_deg = out.row.yaw_samples ? std::sqrt(out.yaw_sq_sum / out.row.yaw_samples) : 0.0;
  } catch (const std::exception& e) {
    out.row.error = e.what();
    out.row.success = false;
  }
  return out;
}

}  // namespace

PlanarPose episode_start(const ExperimentConfig& c, int episode)
{
  Rng rng = Rng::stream(c.seed, {kStartStream, static_cast<std::uint64_t>(episode)});
  PlanarPose p = c.start;
  p.d_x += rng.uniform(-c.start_jitter.d_x, c.start_jitter.d_x);
  p.d_y += rng.uniform(-c.start_jitter.d_y, c.start_jitter.d_y);
  p.psi += rng.uniform(-c.start_jitter.psi, c.start_jitter.psi);
  return p;
}

Scenario parse_scenario(std::string_view name)
{
  if (name == "indoor_dock") return Scenario::indoor_dock;
  if (name == "outdoor_boats") return Scenario::outdoor_boats;
  if (name == "swarm_train") return Scenario::swarm_train;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(Scenario scenario)
{
  switch (scenario) {
    case Scenario::indoor_dock: return "indoor_dock";
    case Scenario::outdoor_boats: return "outdoor_boats";
    case Scenario::swarm_train: return "swarm_train";
  }
  return "?";
}

LatchConfig default_latch(Scenario scenario)
{
  LatchConfig l;
  if (scenario == Scenario::indoor_dock) {
    l.thresholds = LatchThresholds::indoor();
    l.gains.dx_standoff_mm = 0.0;
  } else {
    l.thresholds = LatchThresholds::outdoor();
    l.gains.dx_standoff_mm = 500.0;
  }
  return l;
}

void ExperimentConfig::validate() const
{
  try {
    if (episodes < 1) throw ConfigError("episodes must be at least 1");
    if (frames_per_episode < 1) throw ConfigError("frames_per_episode must be at least 1");
    if (estimator.window_capacity < 1 || estimator.window_capacity % 2 == 0)
      throw ConfigError("window must be an odd integer >= 1");
    if (!(estimator.d_ref_mm > 0.0)) throw ConfigError("d_ref_mm must be positive");
    if (!(start.d_x > 0.0)) throw ConfigError("start.d_x must be positive");
    if (start_jitter.d_x < 0.0 || start_jitter.d_y < 0.0 || start_jitter.psi < 0.0 || start_jitter.d_x >= start.d_x)
      throw ConfigError("start_jitter must be non-negative and smaller than start.d_x");
    if (swarm_robots < 2) throw ConfigError("swarm.robots must be at least 2");
    if (!(swarm_spacing_mm > 0.0)) throw ConfigError("swarm.spacing_mm must be positive");
    if (swarm_max_ticks < 1) throw ConfigError("swarm.max_ticks must be at least 1");
    noise.validate();
    bundle.validate();
    camera.validate();
    latch.validate();
    codebook.validate(static_cast<int>(bundle.placements.size()));
    if (scenario == Scenario::swarm_train)
      for (int i = 0; i < static_cast<int>(bundle.placements.size()); ++i)
        if (!bundle.find(i)) throw ConfigError("swarm screens must use tag IDs 0..n-1");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

RunOutput run(const ExperimentConfig& config, const RunOptions& options)
{
  config.validate();
  const int n = config.episodes;
  std::vector<EpisodeOutcome> outcomes(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) outcomes[static_cast<std::size_t>(i)] = run_one(config, i, options.traces);
  };
  const int workers = std::clamp(options.workers, 1, std::max(1, n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunOutput out;
  Report& r = out.report;
  r.scenario = std::string(to_string(config.scenario));
  r.estimator = std::string(to_string(config.estimator.kind));
  r.profile = config.noise.label;
  r.seed = config.seed;
  r.episodes = n;
  double det = 0.0;
  double sq = 0.0;
  long samples = 0;
  int successes = 0;
  double attempts = 0.0;
  for (auto& o : outcomes) {
    r.frames += config.frames_per_episode;
    det += o.row.detection_pct;
    sq += o.yaw_sq_sum;
    samples += o.row.yaw_samples;
    r.yaw_max_abs_deg = std::max(r.yaw_max_abs_deg, o.row.yaw_max_abs_deg);
    successes += o.row.success ? 1 : 0;
    attempts += o.row.attempts;
    r.rows.push_back(o.row);
    if (options.traces) out.traces.push_back(std::move(o.trace));
  }
  r.detection_pct = det / n;
  r.yaw_rmse_deg = samples ? std::sqrt(sq / samples) : 0.0;
  r.success_rate = 100.0 * successes / n;
  r.mean_attempts = attempts / n;
  return out;
}

std::vector<DeltaRow> compare(const Report& a, const Report& b)
{
  if (a.scenario != b.scenario)
    throw std::invalid_argument("cannot compare scenario " + a.scenario + " with " + b.scenario);
  auto row = [](const char* name, double x, double y) { return DeltaRow{name, x, y, y - x}; };
  return {row("detection_pct", a.detection_pct, b.detection_pct),
          row("yaw_rmse_deg", a.yaw_rmse_deg, b.yaw_rmse_deg),
          row("yaw_max_abs_deg", a.yaw_max_abs_deg, b.yaw_max_abs_deg),
          row("success_rate", a.success_rate, b.success_rate),
          row("mean_attempts", a.mean_attempts, b.mean_attempts)};
}

std::string format_table(const std::vector<Report>& reports)
{
  std::ostringstream os;
  os << pad_right("scenario", 16) << pad_right("method", 16) << pad("tag detection %", 17) << pad("yaw RMSE (deg)", 16)
     << pad("yaw max |err| (deg)", 21) << pad("success %", 11) << pad("mean attempts", 15) << '\n';
  for (const auto& r : reports)
    os << pad_right(r.scenario, 16) << pad_right(r.estimator, 16) << pad(cell(r.detection_pct, 1), 17)
       << pad(cell(r.yaw_rmse_deg, 3), 16) << pad(cell(r.yaw_max_abs_deg, 3), 21) << pad(cell(r.success_rate, 1), 11)
       << pad(cell(r.mean_attempts, 2), 15) << '\n';
  return os.str();
}

std::string format_comparison(const Report& a, const Report& b, const std::vector<DeltaRow>& rows)
{
  std::ostringstream os;
  os << "scenario " << a.scenario << ": " << a.estimator << " (a) vs " << b.estimator << " (b)\n";
  os << pad_right("metric", 18) << pad("a", 12) << pad("b", 12) << pad("b - a", 12) << '\n';
  for (const auto& d : rows)
    os << pad_right(d.metric, 18) << pad(cell(d.a, 3), 12) << pad(cell(d.b, 3), 12) << pad(cell(d.delta, 3), 12)
       << '\n';
  return os.str();
}

}  // namespace at3d
