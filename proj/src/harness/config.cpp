#include "influence/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "influence/core/errors.hpp"
#include "influence/env/circle.hpp"
#include "influence/env/driving.hpp"
#include "influence/env/reaching.hpp"
#include "influence/human/rule_families.hpp"
#include "influence/human/stackelberg_human.hpp"

namespace influence {

using nlohmann::json;

namespace {

const std::vector<std::string> kEnvironments = {"highway", "driving", "intersection", "circle",
                                                "robot"};
const std::vector<std::string> kHumans = {"stackelberg-human", "driving-rules", "intersection-rules",
                                          "circle-rules", "robot-rules"};
const std::vector<std::string> kAlgorithms = {"unified", "latent", "stackelberg", "noise",
                                              "one-step"};

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Copies numeric override fields into `targets`; unknown keys are rejected.
void apply_overrides(const json& overrides, const std::map<std::string, double*>& targets,
                     const std::string& what) {
  if (overrides.is_null()) return;
  if (!overrides.is_object()) throw ConfigurationError(what + " overrides must be an object");
  for (const auto& [key, value] : overrides.items()) {
    auto it = targets.find(key);
    if (it == targets.end()) throw ConfigurationError("unknown " + what + " override '" + key + "'");
    if (!value.is_number()) throw ConfigurationError(what + " override '" + key + "' must be numeric");
    *it->second = value.get<double>();
  }
}

PlannerConfig planner_from_json(const json& j) {
  PlannerConfig p;
  if (j.is_null()) return p;
  p.budget = j.value("budget", p.budget);
  p.exploration = j.value("exploration", p.exploration);
  p.k_action = j.value("k_action", p.k_action);
  p.alpha_action = j.value("alpha_action", p.alpha_action);
  p.k_obs = j.value("k_obs", p.k_obs);
  p.alpha_obs = j.value("alpha_obs", p.alpha_obs);
  p.discount = j.value("discount", p.discount);
  p.steps_per_decision = j.value("steps_per_decision", p.steps_per_decision);
  p.lookahead_interactions = j.value("lookahead_interactions", p.lookahead_interactions);
  p.rollout_depth = j.value("rollout_depth", p.rollout_depth);
  p.state_kernel = j.value("state_kernel", p.state_kernel);
  const std::string rollout = j.value("rollout", std::string("random"));
  if (rollout == "random") {
    p.rollout = RolloutPolicy::kRandom;
  } else if (rollout == "default-option") {
    p.rollout = RolloutPolicy::kDefaultOption;
  } else {
    throw ConfigurationError("unknown rollout policy '" + rollout + "'");
  }
  p.time_budget_ms = j.value("time_budget_ms", p.time_budget_ms);
  return p;
}

json planner_to_json(const PlannerConfig& p) {
  return {{"budget", p.budget},
          {"exploration", p.exploration},
          {"k_action", p.k_action},
          {"alpha_action", p.alpha_action},
          {"k_obs", p.k_obs},
          {"alpha_obs", p.alpha_obs},
          {"discount", p.discount},
          {"steps_per_decision", p.steps_per_decision},
          {"lookahead_interactions", p.lookahead_interactions},
          {"rollout_depth", p.rollout_depth},
          {"state_kernel", p.state_kernel},
          {"rollout", p.rollout == RolloutPolicy::kRandom ? "random" : "default-option"},
          {"time_budget_ms", p.time_budget_ms}};
}

AlgorithmSpec algorithm_from_json(const json& j) {
  AlgorithmSpec a;
  if (j.is_string()) {
    a.id = j.get<std::string>();
    return a;
  }
  a.id = j.at("id").get<std::string>();
  a.planner = planner_from_json(j.value("planner", json()));
  a.particles = j.value("particles", a.particles);
  a.exhaustive = j.value("exhaustive", a.exhaustive);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    a.grid.robot_options = g.value("robot_options", a.grid.robot_options);
    a.grid.human_options = g.value("human_options", a.grid.human_options);
    a.grid.blocks = g.value("blocks", a.grid.blocks);
    a.grid.block_length = g.value("block_length", a.grid.block_length);
  }
  a.lambda = j.value("lambda", a.lambda);
  a.inverse_beta = j.value("inverse_beta", a.inverse_beta);
  a.noise_fraction = j.value("noise_fraction", a.noise_fraction);
  return a;
}

json algorithm_to_json(const AlgorithmSpec& a) {
  return {{"id", a.id},
          {"planner", planner_to_json(a.planner)},
          {"particles", a.particles},
          {"exhaustive", a.exhaustive},
          {"grid",
           {{"robot_options", a.grid.robot_options},
            {"human_options", a.grid.human_options},
            {"blocks", a.grid.blocks},
            {"block_length", a.grid.block_length}}},
          {"lambda", a.lambda},
          {"inverse_beta", a.inverse_beta},
          {"noise_fraction", a.noise_fraction}};
}

}  // namespace

void ScenarioConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ConfigurationError("unsupported schema_version " + std::to_string(schema_version));
  }
  if (!contains(kEnvironments, environment)) {
    throw ConfigurationError("unknown environment id '" + environment + "'");
  }
  if (!contains(kHumans, human)) throw ConfigurationError("unknown human model id '" + human + "'");
  if (algorithms.empty()) throw ConfigurationError("no algorithms configured");
  std::vector<std::string> seen;
  for (const auto& a : algorithms) {
    if (contains(seen, a.id)) throw ConfigurationError("algorithm '" + a.id + "' listed twice");
    seen.push_back(a.id);
    if (!contains(kAlgorithms, a.id)) throw ConfigurationError("unknown algorithm id '" + a.id + "'");
    a.planner.validate();
    a.grid.validate();
    if (a.particles < 0) throw ConfigurationError("particles must be >= 0");
    if (!(a.lambda >= 0)) throw ConfigurationError("lambda must be >= 0");
    if (!(a.noise_fraction >= 0)) throw ConfigurationError("noise_fraction must be >= 0");
  }
  if (interactions < 1 || timesteps < 1 || humans < 1) {
    throw ConfigurationError("interactions, timesteps and humans must be >= 1");
  }
  if (static_cast<long long>(interactions) * timesteps > horizon_cap) {
    throw ConfigurationError("interactions x timesteps exceeds the horizon cap");
  }
  if (pair_by != "human" && pair_by != "interaction") {
    throw ConfigurationError("pair_by must be 'human' or 'interaction'");
  }
  for (double p : rule_prior) {
    if (!(p >= 0) || !std::isfinite(p)) throw ConfigurationError("rule_prior entries must be >= 0");
  }
}

ScenarioConfig config_from_json(const json& j) {
  try {
    ScenarioConfig c;
    c.schema_version = j.at("schema_version").get<int>();
    c.name = j.value("name", c.name);
    c.environment = j.at("environment").get<std::string>();
    c.environment_overrides = j.value("environment_overrides", json::object());
    c.human = j.at("human").get<std::string>();
    c.human_overrides = j.value("human_overrides", json::object());
    c.rule_prior = j.value("rule_prior", std::vector<double>{});
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(algorithm_from_json(a));
    c.interactions = j.value("interactions", c.interactions);
    c.timesteps = j.value("timesteps", c.timesteps);
    c.humans = j.value("humans", c.humans);
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.pair_by = j.value("pair_by", c.pair_by);
    c.horizon_cap = j.value("horizon_cap", c.horizon_cap);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed scenario config: ") + e.what());
  }
}

json to_json(const ScenarioConfig& c) {
  json algs = json::array();
  for (const auto& a : c.algorithms) algs.push_back(algorithm_to_json(a));
  return {{"schema_version", c.schema_version},
          {"name", c.name},
          {"environment", c.environment},
          {"environment_overrides", c.environment_overrides},
          {"human", c.human},
          {"human_overrides", c.human_overrides},
          {"rule_prior", c.rule_prior},
          {"algorithms", algs},
          {"interactions", c.interactions},
          {"timesteps", c.timesteps},
          {"humans", c.humans},
          {"seed", c.seed},
          {"output_dir", c.output_dir},
          {"pair_by", c.pair_by},
          {"horizon_cap", c.horizon_cap}};
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigurationError("cannot parse config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

std::vector<std::string> registered_environments() { return kEnvironments; }
std::vector<std::string> registered_humans() { return kHumans; }
std::vector<std::string> registered_algorithms() { return kAlgorithms; }

std::shared_ptr<const Environment> make_environment(const std::string& id, int timesteps,
                                                    int interactions, const json& overrides) {
  if (id == "highway" || id == "driving" || id == "intersection") {
    DrivingParams p = id == "highway"   ? DrivingParams::highway_block()
                      : id == "driving" ? DrivingParams::highway_pass()
                                        : DrivingParams::intersection();
    p.timesteps = timesteps;
    p.interactions = interactions;
    apply_overrides(overrides,
                    {{"dt", &p.dt},
                     {"v_max", &p.v_max},
                     {"max_accel", &p.max_accel},
                     {"block_gap_min", &p.block_gap_min},
                     {"block_gap_max", &p.block_gap_max},
                     {"block_speed_min", &p.block_speed_min},
                     {"block_speed_max", &p.block_speed_max},
                     {"approach_min", &p.approach_min},
                     {"approach_max", &p.approach_max}},
                    "environment");
    return std::make_shared<DrivingEnv>(p);
  }
  if (id == "circle") {
    CircleParams p;
    p.timesteps = timesteps;
    p.interactions = interactions;
    apply_overrides(overrides,
                    {{"dt", &p.dt},
                     {"radius", &p.radius},
                     {"capture_radius", &p.capture_radius},
                     {"pursuer_speed", &p.pursuer_speed},
                     {"evader_speed", &p.evader_speed}},
                    "environment");
    return std::make_shared<CircleEnv>(p);
  }
  if (id == "robot") {
    ReachingParams p;
    p.timesteps = timesteps;
    p.interactions = interactions;
    apply_overrides(overrides,
                    {{"dt", &p.dt}, {"robot_speed", &p.robot_speed}, {"human_speed", &p.human_speed}},
                    "environment");
    return std::make_shared<ReachingEnv>(p);
  }
  throw ConfigurationError("unknown environment id '" + id + "'");
}

RewardSpec default_reward(const std::string& environment_id) {
  if (environment_id == "highway") return RewardSpec::slow_human();
  if (environment_id == "driving" || environment_id == "intersection") {
    return RewardSpec::robot_crossing();
  }
  if (environment_id == "circle" || environment_id == "robot") return RewardSpec::negative_distance();
  throw ConfigurationError("unknown environment id '" + environment_id + "'");
}

RewardSpec default_human_reward(const std::string& environment_id) {
  if (environment_id == "intersection") return RewardSpec::human_crossing();
  return RewardSpec::human_score();
}

World make_world(const ScenarioConfig& cfg) {
  auto env = make_environment(cfg.environment, cfg.timesteps, cfg.interactions,
                              cfg.environment_overrides);
  std::shared_ptr<const HumanModel> human;
  auto driving = std::dynamic_pointer_cast<const DrivingEnv>(env);

  if (cfg.human == "stackelberg-human") {
    if (!driving) throw ConfigurationError("stackelberg-human needs a driving environment");
    StackelbergHumanOptions o;
    double block = o.block_length;
    apply_overrides(cfg.human_overrides, {{"beta", &o.beta}, {"block_length", &block}}, "human");
    o.block_length = static_cast<int>(block);
    human = std::make_shared<StackelbergHighwayHuman>(driving, o);
  } else {
    SwitchingOptions o;
    double threshold = o.loss_threshold;
    apply_overrides(cfg.human_overrides,
                    {{"loss_threshold", &threshold},
                     {"switch_probability", &o.switch_probability},
                     {"beta", &o.beta}},
                    "human");
    o.loss_threshold = static_cast<int>(threshold);
    if (cfg.human == "circle-rules") {
      auto c = std::dynamic_pointer_cast<const CircleEnv>(env);
      if (!c) throw ConfigurationError("circle-rules needs the circle environment");
      human = std::make_shared<CircleHuman>(c, o);
    } else if (cfg.human == "robot-rules") {
      auto r = std::dynamic_pointer_cast<const ReachingEnv>(env);
      if (!r) throw ConfigurationError("robot-rules needs the robot environment");
      human = std::make_shared<ReachingHuman>(r, o);
    } else if (cfg.human == "driving-rules") {
      if (!driving) throw ConfigurationError("driving-rules needs a driving environment");
      human = std::make_shared<DrivingHuman>(driving, o);
    } else if (cfg.human == "intersection-rules") {
      if (!driving) throw ConfigurationError("intersection-rules needs a driving environment");
      human = std::make_shared<IntersectionHuman>(driving, o);
    } else {
      throw ConfigurationError("unknown human model id '" + cfg.human + "'");
    }
  }
  GenerativeModel model = compose_model(env, human, default_reward(cfg.environment));
  return {env, human, model};
}

std::vector<std::string> builtin_scenarios() {
  return {"sim-highway-stackelberg-human", "sim-circle", "sim-driving", "sim-robot",
          "one-step-intersection"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "sim-highway-stackelberg-human") {
    c.environment = "highway";
    c.human = "stackelberg-human";
    c.interactions = 100;
    c.timesteps = 120;
    c.humans = 1;
    c.pair_by = "interaction";
    AlgorithmSpec unified;
    unified.id = "unified";
    unified.planner.budget = 200;
    unified.planner.steps_per_decision = 10;
    unified.planner.lookahead_interactions = 1;
    unified.planner.rollout = RolloutPolicy::kDefaultOption;
    AlgorithmSpec stackelberg;
    stackelberg.id = "stackelberg";
    c.algorithms = {unified, stackelberg};
  } else if (name == "sim-circle" || name == "sim-driving" || name == "sim-robot") {
    c.environment = name == "sim-circle" ? "circle" : name == "sim-driving" ? "driving" : "robot";
    c.human = c.environment + "-rules";
    c.interactions = 100;
    c.timesteps = 10;
    c.humans = 20;
    c.pair_by = "human";
    AlgorithmSpec unified;
    unified.id = "unified";
    unified.planner.budget = 300;
    unified.planner.steps_per_decision = 5;
    unified.planner.lookahead_interactions = 2;
    AlgorithmSpec latent;
    latent.id = "latent";
    latent.planner = unified.planner;
    c.algorithms = {unified, latent};
  } else if (name == "one-step-intersection") {
    c.environment = "intersection";
    c.human = "intersection-rules";
    c.interactions = 20;
    c.timesteps = 40;
    c.humans = 20;
    c.pair_by = "human";
    AlgorithmSpec one_step;
    one_step.id = "one-step";
    one_step.grid = {3, 3, 2, 10};
    one_step.lambda = 20.0;
    AlgorithmSpec stackelberg;
    stackelberg.id = "stackelberg";
    stackelberg.grid = one_step.grid;
    c.algorithms = {one_step, stackelberg};
  } else {
    throw ConfigurationError("unknown built-in scenario '" + name + "'");
  }
  c.validate();
  return c;
}

}  // namespace influence
