#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "at3d/boat.hpp"
#include "at3d/bundle.hpp"
#include "at3d/bundle_estimator.hpp"
#include "at3d/camera.hpp"
#include "at3d/episode.hpp"
#include "at3d/noise.hpp"

namespace at3d {

inline const std::string kStandBy = "STAND_BY";
inline const std::string kFormTrainLink = "FORM_TRAIN_LINK";
inline const std::string kLatchedFormTrainLink = "LATCHED_FORM_TRAIN_LINK";

/// Bijection between base tag IDs and messages. A robot with an n-screen
/// bundle shows message m as tags base(m), base(m) + 1, ..., base(m) + n - 1,
/// so base IDs must be at least n apart.
class TagCodebook {
 public:
  /// STAND_BY = 0, FORM_TRAIN_LINK = 10, LATCHED_FORM_TRAIN_LINK = 20.
  static TagCodebook standard();

  /// Throws std::invalid_argument if either the ID or the message is taken.
  void add(int base_tag_id, const std::string& message);
  /// Throws std::invalid_argument for an unknown message.
  int tag_for(const std::string& message) const;
  std::optional<std::string> message_for(int base_tag_id) const;
  /// Base ID whose screen range [base, base + screens) holds `tag_id`.
  std::optional<int> base_of(int tag_id, int screens) const;
  /// Throws std::invalid_argument if a required message is missing or two
  /// screen ranges of width `screens` overlap.
  void validate(int screens) const;
  const std::map<int, std::string>& entries() const { return by_tag_; }

 private:
  std::map<int, std::string> by_tag_;
  std::map<std::string, int> by_message_;
};

enum class SwarmPhase { waiting, approaching, latched };
std::string_view to_string(SwarmPhase phase);

struct SwarmRobot {
  int id = 0;
  BoatState boat;
  int displayed_tag = 0;  ///< base ID currently on the screens
  SwarmPhase phase = SwarmPhase::waiting;
  std::optional<int> sees;  ///< index of the robot ahead in the scenario
  bool commanding = false;  ///< leader has issued the formation order

  PoseEstimator estimator;
  std::deque<int> votes;  ///< per-frame base IDs, newest last
  std::optional<LatchController> latch;
};

enum class SwarmEventKind { tag_changed, phase, latch_success, latch_fail };
std::string_view to_string(SwarmEventKind kind);

struct SwarmEvent {
  long tick = 0;
  int robot = 0;
  SwarmEventKind kind = SwarmEventKind::phase;
  std::string detail;
};

struct FormationScenario {
  std::vector<SwarmRobot> robots;  ///< robots[0] is the leader
  double spacing_mm = 1000.0;      ///< camera-to-tag gap between neighbours at rest
  std::string formation = "train_link";
  TagCodebook codebook = TagCodebook::standard();
  BundleGeometry bundle;  ///< screen layout with tag IDs 0..n-1
  CameraIntrinsics camera;
  NoiseProfile noise;
  EstimatorConfig estimator;
  LatchConfig latch;
  double camera_offset_mm = 500.0;
  double tag_offset_mm = 500.0;
  long command_tick = 0;  ///< tick at which the leader gives the order; negative never
  long tick = 0;
  std::vector<SwarmEvent> events;
};

struct ScenarioOptions {
  int robots = 3;
  double spacing_mm = 1000.0;
  BundleGeometry bundle = build_bundle(130.0, 1, 10.0, 0.0);
  CameraIntrinsics camera;
  NoiseProfile noise;
  EstimatorConfig estimator;
  LatchConfig latch;
  TagCodebook codebook = TagCodebook::standard();
  long command_tick = 0;
};

/// Robots in a line along +W_x, all heading +W_x, robot k seeing robot k-1.
FormationScenario make_train_link(const ScenarioOptions& options);

/// Base tag ID for the robot's (phase, formation). Throws
/// std::invalid_argument when the codebook lacks the message.
int encode_state(const SwarmRobot& robot, const std::string& formation, const TagCodebook& codebook);

struct Observation {
  std::optional<int> voted_tag;  ///< strict majority over the vote window, if any
  PlanarPose planar;
};

/// Renders what robot `index` sees of the robot ahead (as displayed in
/// `ahead`), estimates the bundle pose and updates the vote window.
/// Nothing when the robot sees no one or no screen is detected.
std::optional<Observation> observe(SwarmRobot& observer, const SwarmRobot& ahead, const FormationScenario& scenario,
                                   long frame, std::optional<PlanarPose>* truth = nullptr);

/// One lock-step tick: every robot observes the previous tick's displays,
/// then acts, then all displays update together.
void step_swarm(FormationScenario& scenario);

bool formation_complete(const FormationScenario& scenario);

/// Steps until the formation completes or `max_ticks` elapse. Returns the
/// completion tick.
std::optional<long> run_formation(FormationScenario& scenario, long max_ticks);

}  // namespace at3d
