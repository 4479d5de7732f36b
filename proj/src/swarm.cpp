#include "at3d/swarm.hpp"

#include <algorithm>
#include <stdexcept>

#include "at3d/scene.hpp"
#include "at3d/simulator.hpp"

namespace at3d {

TagCodebook TagCodebook::standard()
{
  TagCodebook cb;
  cb.add(0, kStandBy);
  cb.add(10, kFormTrainLink);
  cb.add(20, kLatchedFormTrainLink);
  return cb;
}

void TagCodebook::add(int base_tag_id, const std::string& message)
{
  if (base_tag_id < 0) throw std::invalid_argument("tag IDs must be non-negative");
  if (by_tag_.count(base_tag_id)) throw std::invalid_argument("tag ID already in codebook: " + std::to_string(base_tag_id));
  if (by_message_.count(message)) throw std::invalid_argument("message already in codebook: " + message);
  by_tag_.emplace(base_tag_id, message);
  by_message_.emplace(message, base_tag_id);
}

int TagCodebook::tag_for(const std::string& message) const
{
  const auto it = by_message_.find(message);
  if (it == by_message_.end()) throw std::invalid_argument("codebook has no entry for " + message);
  return it->second;
}

std::optional<std::string> TagCodebook::message_for(int base_tag_id) const
{
  const auto it = by_tag_.find(base_tag_id);
  if (it == by_tag_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> TagCodebook::base_of(int tag_id, int screens) const
{
  auto it = by_tag_.upper_bound(tag_id);
  if (it == by_tag_.begin()) return std::nullopt;
  --it;
  if (tag_id - it->first >= screens) return std::nullopt;
  return it->first;
}

void TagCodebook::validate(int screens) const
{
  for (const auto* m : {&kStandBy, &kFormTrainLink, &kLatchedFormTrainLink})
    if (!by_message_.count(*m)) throw std::invalid_argument("codebook lacks required message " + *m);
  std::optional<int> prev;
  for (const auto& [tag, msg] : by_tag_) {
    if (prev && tag - *prev < screens)
      throw std::invalid_argument("codebook IDs " + std::to_string(*prev) + " and " + std::to_string(tag) +
                                  " overlap for " + std::to_string(screens) + " screens");
    prev = tag;
  }
}

std::string_view to_string(SwarmPhase phase)
{
  switch (phase) {
    case SwarmPhase::waiting: return "WAITING";
    case SwarmPhase::approaching: return "APPROACHING";
    case SwarmPhase::latched: return "LATCHED";
  }
  return "?";
}

std::string_view to_string(SwarmEventKind kind)
{
  switch (kind) {
    case SwarmEventKind::tag_changed: return "TAG_CHANGED";
    case SwarmEventKind::phase: return "PHASE";
    case SwarmEventKind::latch_success: return "LATCH_SUCCESS";
    case SwarmEventKind::latch_fail: return "LATCH_FAIL";
  }
  return "?";
}

namespace {

std::string upper(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string form_message(const std::string& formation) { return "FORM_" + upper(formation); }
std::string latched_message(const std::string& formation) { return "LATCHED_FORM_" + upper(formation); }

BundleGeometry displayed_bundle(const BundleGeometry& layout, int base)
{
  BundleGeometry b = layout;
  for (auto& p : b.placements) p.tag_id += base;
  return b;
}

}  // namespace

FormationScenario make_train_link(const ScenarioOptions& options)
{
  if (options.robots < 1) throw std::invalid_argument("a formation needs at least one robot");
  if (!(options.spacing_mm > 0.0)) throw std::invalid_argument("spacing must be positive");
  options.bundle.validate();
  const int screens = static_cast<int>(options.bundle.placements.size());
  for (int i = 0; i < screens; ++i)
    if (!options.bundle.find(i)) throw std::invalid_argument("screen layout must use tag IDs 0..n-1");
  options.codebook.validate(screens);

  FormationScenario sc;
  sc.spacing_mm = options.spacing_mm;
  sc.codebook = options.codebook;
  sc.bundle = options.bundle;
  sc.camera = options.camera;
  sc.noise = options.noise;
  sc.estimator = options.estimator;
  sc.latch = options.latch;
  sc.command_tick = options.command_tick;

  const double pitch = options.spacing_mm + sc.camera_offset_mm + sc.tag_offset_mm;
  for (int k = 0; k < options.robots; ++k) {
    SwarmRobot r;
    r.id = k + 1;
    r.estimator = PoseEstimator(options.estimator);
    r.boat.position = Eigen::Vector2d(-k * pitch, 0.0);
    if (k > 0) r.sees = k - 1;
    r.displayed_tag = encode_state(r, sc.formation, sc.codebook);
    sc.robots.push_back(std::move(r));
  }
  return sc;
}

int encode_state(const SwarmRobot& robot, const std::string& formation, const TagCodebook& codebook)
{
  if (robot.phase == SwarmPhase::latched) return codebook.tag_for(latched_message(formation));
  if (robot.commanding) return codebook.tag_for(form_message(formation));
  return codebook.tag_for(kStandBy);
}

std::optional<Observation> observe(SwarmRobot& observer, const SwarmRobot& ahead, const FormationScenario& sc,
                                   long frame, std::optional<PlanarPose>* truth)
{
  const Pose6D nominal =
      world_from_camera(observer.boat.position, observer.boat.heading_deg, sc.camera_offset_mm).inverse() *
      world_from_bundle(ahead.boat.position, ahead.boat.heading_deg, sc.tag_offset_mm);
  if (truth) *truth = to_planar(nominal);
  if (!(nominal.translation().z() > 0.0)) return std::nullopt;

  const int screens = static_cast<int>(sc.bundle.placements.size());
  const SimFrame sim = simulate_frame(nominal, displayed_bundle(sc.bundle, ahead.displayed_tag), sc.camera, sc.noise,
                                      frame, static_cast<std::uint64_t>(observer.id));

  // Decode each screen into (base, screen index); the pose pipeline only
  // ever sees screen indices so the displayed ID cannot bias it.
  std::vector<Detection> screens_seen;
  std::map<int, int> frame_votes;
  for (const auto& d : sim.detections) {
    const auto base = sc.codebook.base_of(d.tag_id, screens);
    if (!base) continue;
    ++frame_votes[*base];
    Detection local = d;
    local.tag_id = d.tag_id - *base;
    screens_seen.push_back(local);
  }
  if (screens_seen.empty()) return std::nullopt;

  const auto top = std::max_element(frame_votes.begin(), frame_votes.end(),
                                    [](const auto& a, const auto& b) { return a.second < b.second; });
  observer.votes.push_back(top->first);
  const auto window = static_cast<std::size_t>(observer.estimator.config().window_capacity);
  while (observer.votes.size() > window) observer.votes.pop_front();

  Observation obs;
  std::map<int, std::size_t> counts;
  for (int v : observer.votes) ++counts[v];
  for (const auto& [tag, n] : counts)
    if (2 * n > window) obs.voted_tag = tag;

  const auto est = observer.estimator.update(screens_seen, sc.bundle, sc.camera);
  if (!est) return std::nullopt;
  obs.planar = to_planar(est->camera_from_bundle);
  return obs;
}

void step_swarm(FormationScenario& sc)
{
  const long tick = sc.tick;
  const std::vector<SwarmRobot> before = sc.robots;
  const std::string form = form_message(sc.formation);
  const std::string latched = latched_message(sc.formation);

  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    SwarmRobot& r = sc.robots[i];
    if (i == 0) {
      if (sc.command_tick >= 0 && tick >= sc.command_tick) r.commanding = true;
      continue;
    }
    if (!r.sees || r.phase == SwarmPhase::latched) continue;

    std::optional<PlanarPose> truth;
    const auto obs = observe(r, before[*r.sees], sc, tick, &truth);
    std::optional<std::string> message;
    if (obs && obs->voted_tag) message = sc.codebook.message_for(*obs->voted_tag);

    if (r.phase == SwarmPhase::waiting) {
      if (message && (*message == form || *message == latched)) {
        r.phase = SwarmPhase::approaching;
        r.latch.emplace(sc.latch, r.boat, sc.noise.seed, static_cast<std::uint64_t>(r.id));
        sc.events.push_back({tick, r.id, SwarmEventKind::phase, std::string(to_string(r.phase))});
      }
      continue;
    }

    // Approaching: steer on the observed pose, contact judged on the truth.
    std::optional<PlanarPose> est;
    if (obs) est = obs->planar;
    const LatchEvent ev = r.latch->tick(r.boat, *truth, est);
    if (ev == LatchEvent::latched) {
      r.phase = SwarmPhase::latched;
      sc.events.push_back({tick, r.id, SwarmEventKind::latch_success, ""});
      sc.events.push_back({tick, r.id, SwarmEventKind::phase, std::string(to_string(r.phase))});
    } else if (ev == LatchEvent::contact_fail || ev == LatchEvent::timeout_fail) {
      sc.events.push_back({tick, r.id, SwarmEventKind::latch_fail,
                           ev == LatchEvent::contact_fail ? "contact" : "timeout"});
    } else if (ev == LatchEvent::retry) {
      r.estimator.reset();
    }
  }

  for (auto& r : sc.robots) {
    const int tag = encode_state(r, sc.formation, sc.codebook);
    if (tag != r.displayed_tag) {
      r.displayed_tag = tag;
      sc.events.push_back({tick, r.id, SwarmEventKind::tag_changed,
                           std::to_string(tag) + " " + sc.codebook.message_for(tag).value_or("")});
    }
  }
  ++sc.tick;
}

bool formation_complete(const FormationScenario& sc)
{
  return std::all_of(sc.robots.begin() + (sc.robots.empty() ? 0 : 1), sc.robots.end(),
                     [](const SwarmRobot& r) { return r.phase == SwarmPhase::latched; });
}

std::optional<long> run_formation(FormationScenario& sc, long max_ticks)
{
  for (long i = 0; i < max_ticks; ++i) {
    step_swarm(sc);
    if (formation_complete(sc)) return sc.tick - 1;
  }
  return std::nullopt;
}

}  // namespace at3d
