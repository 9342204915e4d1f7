#include "influence/server/session.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "influence/core/errors.hpp"
#include "influence/env/driving.hpp"

namespace influence {

using nlohmann::json;

std::string_view phase_name(SessionPhase p) {
  switch (p) {
    case SessionPhase::kAwaitingInput: return "awaiting-input";
    case SessionPhase::kStepping: return "stepping";
    case SessionPhase::kBetweenInteractions: return "between-interactions";
    case SessionPhase::kFinished: return "finished";
    case SessionPhase::kClosed: return "closed";
  }
  return "closed";
}

namespace {

json vehicle_json(const VehicleView& v) {
  return {{"x", v.x}, {"y", v.y}, {"heading", v.heading}, {"speed", v.speed}};
}

VehicleView vehicle_from(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("heading").get<double>(),
          j.at("speed").get<double>()};
}

VehicleView view(const VehicleState& v) { return {v.x, v.y, v.heading, v.speed}; }

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

json to_json(const FrameMessage& f) {
  return {{"schema", kSessionSchema},
          {"type", "frame"},
          {"session", f.session},
          {"tick", f.tick},
          {"interaction", f.interaction},
          {"timestep", f.timestep},
          {"robot", vehicle_json(f.robot)},
          {"human", vehicle_json(f.human)},
          {"score", f.score},
          {"collision", f.collision},
          {"held_input", f.held_input},
          {"finished", f.finished},
          {"step_ms", f.step_ms}};
}

FrameMessage frame_from_json(const json& j) {
  FrameMessage f;
  f.session = j.at("session").get<std::string>();
  f.tick = j.at("tick").get<std::uint64_t>();
  f.interaction = j.at("interaction").get<int>();
  f.timestep = j.at("timestep").get<int>();
  f.robot = vehicle_from(j.at("robot"));
  f.human = vehicle_from(j.at("human"));
  f.score = j.at("score").get<double>();
  f.collision = j.at("collision").get<bool>();
  f.held_input = j.at("held_input").get<bool>();
  f.finished = j.at("finished").get<bool>();
  f.step_ms = j.value("step_ms", 0.0);
  return f;
}

json to_json(const InputMessage& in) {
  return {{"schema", kSessionSchema},
          {"type", "input"},
          {"tick", in.tick},
          {"steering", in.steering},
          {"accel", in.accel}};
}

InputMessage input_from_json(const json& j) {
  try {
    InputMessage in;
    in.tick = j.value("tick", std::uint64_t{0});
    const double steering = j.at("steering").get<double>();
    const double accel = j.at("accel").get<double>();
    if (!std::isfinite(steering) || !std::isfinite(accel)) {
      throw ConfigurationError("input values must be finite");
    }
    in.steering = clamp_unit(steering);
    in.accel = clamp_unit(accel);
    return in;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed input message: ") + e.what());
  }
}

std::vector<std::string> session_scenarios() { return {"highway", "intersection"}; }
std::vector<std::string> session_algorithms() { return {"unified", "stackelberg", "noise"}; }

namespace {

ScenarioConfig session_config(const std::string& scenario, const std::string& algorithm,
                              std::uint64_t seed, const SessionOptions& opts) {
  const auto scenarios = session_scenarios();
  const auto algorithms = session_algorithms();
  if (std::find(scenarios.begin(), scenarios.end(), scenario) == scenarios.end()) {
    throw ConfigurationError("unknown scenario id '" + scenario + "'");
  }
  if (std::find(algorithms.begin(), algorithms.end(), algorithm) == algorithms.end()) {
    throw ConfigurationError("unknown algorithm id '" + algorithm + "'");
  }
  ScenarioConfig c;
  c.name = "session";
  c.environment = scenario;
  c.human = scenario == "highway" ? "stackelberg-human" : "intersection-rules";
  c.timesteps = opts.timesteps > 0 ? opts.timesteps : (scenario == "highway" ? 20 : 40);
  c.interactions = opts.interactions;
  c.humans = 1;
  c.seed = seed;
  AlgorithmSpec a;
  a.id = algorithm;
  a.planner.budget = opts.planner_budget;
  a.planner.time_budget_ms = opts.planner_ms;
  a.planner.steps_per_decision = 10;
  a.planner.lookahead_interactions = 1;
  a.planner.rollout = RolloutPolicy::kDefaultOption;
  const int options = scenario == "highway" ? 9 : 3;
  a.grid = {options, options, 2, 10};
  c.algorithms = {a};
  c.validate();
  return c;
}

}  // namespace

Session::Session(std::string id, const std::string& scenario, const std::string& algorithm,
                 std::uint64_t seed, SessionOptions opts)
    : id_(std::move(id)),
      scenario_(scenario),
      algorithm_(algorithm),
      opts_(opts),
      cfg_(session_config(scenario, algorithm, seed, opts)),
      world_(make_world(cfg_)),
      controller_(make_controller(cfg_.algorithms.front(), world_, cfg_)),
      world_rng_(derive_seed(seed, 0)),
      robot_rng_(derive_seed(seed, 0xC0FFEE)) {
  x_.s = world_.env->reset(world_rng_);
  x_.phi = world_.human->initial_rule(0);
  controller_->reset(x_.s, robot_rng_);
  if (opts_.planner_ms > 0) controller_->set_time_budget_ms(opts_.planner_ms);
  tally_.begin(x_.s);
}

HumanAction Session::human_action(const InputMessage& in) const {
  const auto& b = world_.env->human_bounds();
  // Positive steering turns right, i.e. clockwise.
  HumanAction a;
  a.values = {-clamp_unit(in.steering) * b.upper[0], clamp_unit(in.accel) * b.upper[1]};
  a.values = b.clamp(a.values);
  return a;
}

FrameMessage Session::frame() const {
  FrameMessage f;
  f.session = id_;
  f.tick = tick_;
  f.interaction = interaction_;
  f.timestep = x_.s.timestep % world_.env->epochs().timesteps_per_interaction;
  f.robot = view(DrivingEnv::robot(x_.s));
  f.human = view(DrivingEnv::human(x_.s));
  f.score = score_;
  f.collision = last_collision_;
  f.held_input = last_held_;
  f.finished = phase_ == SessionPhase::kFinished || phase_ == SessionPhase::kClosed;
  f.step_ms = last_step_ms_;
  return f;
}

FrameMessage Session::tick(const std::optional<InputMessage>& input) {
  if (phase_ == SessionPhase::kClosed) throw ConfigurationError("session " + id_ + " is closed");
  if (phase_ == SessionPhase::kFinished) return frame();
  const auto t0 = std::chrono::steady_clock::now();
  phase_ = SessionPhase::kStepping;
  last_held_ = !input.has_value();
  if (input) held_ = *input;
  held_.steering = clamp_unit(held_.steering);
  held_.accel = clamp_unit(held_.accel);

  const Environment& env = *world_.env;
  const HumanAction a_h = human_action(held_);
  const RobotAction a_r = controller_->act(x_.s, robot_rng_);
  const SystemState s_end = env.step_dynamics(x_.s, a_r, a_h);
  const bool boundary = env.epochs().is_boundary(s_end.timestep);
  const SystemState next = boundary ? env.begin_interaction(s_end, world_rng_) : s_end;

  score_ += env.human_score(s_end, score_spec());
  tally_.add(s_end, env.robot_reward(s_end, world_.model.reward()));
  Observation o;
  o.s = next;
  o.prev_human_action = a_h;
  if (boundary) o.interaction_end = s_end;
  controller_->observe(x_.s, a_r, o, robot_rng_);

  ticks_.push_back({tick_ + 1, interaction_, s_end, a_r, a_h, last_held_});
  last_collision_ = s_end.collision;
  if (boundary) {
    rows_.push_back(tally_.finish(env, s_end, algorithm_, 0, interaction_));
    ++interaction_;
    tally_.begin(next);
  }
  x_.s = next;
  ++tick_;
  if (s_end.timestep >= env.epochs().horizon()) {
    phase_ = SessionPhase::kFinished;
  } else {
    phase_ = boundary ? SessionPhase::kBetweenInteractions : SessionPhase::kAwaitingInput;
  }
  last_step_ms_ =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return frame();
}

std::string Session::close(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create log directory '" + dir + "'");
  const std::string base = (fs::path(dir) / id_).string();
  emit_table(rows_, base + ".csv", TableFormat::kCsv);
  emit_table(rows_, base + ".jsonl", TableFormat::kJsonLines);
  std::ofstream out(base + ".ticks.jsonl", std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write tick log '" + base + ".ticks.jsonl'");
  for (const auto& t : ticks_) {
    json j = {{"tick", t.tick},
              {"interaction", t.interaction},
              {"state", serialize(t.state)},
              {"collision", t.state.collision},
              {"off_road", t.state.off_road},
              {"robot", std::vector<double>(t.robot.values.begin(), t.robot.values.end())},
              {"human", std::vector<double>(t.human.values.begin(), t.human.values.end())},
              {"held_input", t.held_input}};
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for tick log '" + base + ".ticks.jsonl'");
  phase_ = SessionPhase::kClosed;
  return base + ".csv";
}

double rescore(const Environment& env, const std::vector<Session::TickRecord>& ticks) {
  double score = 0.0;
  for (const auto& t : ticks) score += env.human_score(t.state, Session::score_spec());
  return score;
}

}  // namespace influence
