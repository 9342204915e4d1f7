#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "influence/harness/controllers.hpp"
#include "influence/harness/metrics.hpp"
#include "influence/harness/runner.hpp"

namespace influence {

inline constexpr const char* kSessionSchema = "influence-session/1";

struct SessionOptions {
  int timesteps = 20;       // per interaction
  int interactions = 30;
  double planner_ms = 80.0;  // anytime cutoff; 0 plans to the full budget (deterministic)
  int planner_budget = 2000;
};

struct InputMessage {
  std::uint64_t tick = 0;  // last frame tick the client saw
  double steering = 0.0;   // [-1, 1], negative is left
  double accel = 0.0;      // [-1, 1]
};

struct VehicleView {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
};

struct FrameMessage {
  std::string session;
  std::uint64_t tick = 0;
  int interaction = 0;
  int timestep = 0;  // within the interaction
  VehicleView robot;
  VehicleView human;
  double score = 0.0;
  bool collision = false;
  bool held_input = false;  // previous input reused (missed deadline)
  bool finished = false;    // all interactions done
  double step_ms = 0.0;     // time spent inside tick()
};

enum class SessionPhase { kAwaitingInput, kStepping, kBetweenInteractions, kFinished, kClosed };

std::string_view phase_name(SessionPhase p);

nlohmann::json to_json(const FrameMessage& f);
FrameMessage frame_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InputMessage& in);
// Clamps steering/accel into [-1, 1]; throws ConfigurationError on malformed input.
InputMessage input_from_json(const nlohmann::json& j);

std::vector<std::string> session_scenarios();
std::vector<std::string> session_algorithms();

// One live human driving against one robot algorithm.
class Session {
 public:
  // Throws ConfigurationError for unknown ids.
  Session(std::string id, const std::string& scenario, const std::string& algorithm,
          std::uint64_t seed, SessionOptions opts = {});

  const std::string& id() const { return id_; }
  const std::string& scenario() const { return scenario_; }
  const std::string& algorithm() const { return algorithm_; }
  SessionPhase phase() const { return phase_; }
  std::uint64_t tick_count() const { return tick_; }
  double score() const { return score_; }
  const Environment& env() const { return *world_.env; }
  const SystemState& state() const { return x_.s; }

  FrameMessage frame() const;
  // Advances one timestep. A missing input holds the previous one.
  FrameMessage tick(const std::optional<InputMessage>& input);

  // Per-tick log: states after each step and the inputs applied.
  struct TickRecord {
    std::uint64_t tick = 0;
    int interaction = 0;
    SystemState state;  // pre-reset state reached by this tick
    RobotAction robot;
    HumanAction human;
    bool held_input = false;
  };
  const std::vector<TickRecord>& ticks() const { return ticks_; }
  const std::vector<MetricsRow>& rows() const { return rows_; }

  // Writes <dir>/<id>.csv, <id>.jsonl and <id>.ticks.jsonl; returns the CSV path.
  std::string close(const std::string& dir);

  HumanAction human_action(const InputMessage& in) const;
  static RewardSpec score_spec() { return RewardSpec::human_score(); }

 private:
  std::string id_;
  std::string scenario_;
  std::string algorithm_;
  SessionOptions opts_;
  ScenarioConfig cfg_;
  World world_;
  std::unique_ptr<Controller> controller_;
  Rng world_rng_;
  Rng robot_rng_;
  AugmentedState x_;
  InteractionTally tally_;
  std::uint64_t tick_ = 0;
  int interaction_ = 0;
  double score_ = 0.0;
  bool last_collision_ = false;
  bool last_held_ = false;
  double last_step_ms_ = 0.0;
  InputMessage held_;
  SessionPhase phase_ = SessionPhase::kAwaitingInput;
  std::vector<TickRecord> ticks_;
  std::vector<MetricsRow> rows_;
};

// Recomputes the displayed score from a tick log.
double rescore(const Environment& env, const std::vector<Session::TickRecord>& ticks);

}  // namespace influence
