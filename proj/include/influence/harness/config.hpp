#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "influence/baselines/stackelberg.hpp"
#include "influence/core/model.hpp"
#include "influence/planner/pomcpow.hpp"

namespace influence {

inline constexpr int kConfigSchemaVersion = 1;

struct AlgorithmSpec {
  std::string id;  // unified | latent | stackelberg | noise | one-step
  PlannerConfig planner;
  int particles = 0;  // unified: 0 enumerates the prior, otherwise a particle filter of this size
  bool exhaustive = false;  // latent: exhaustive option search instead of tree search
  ActionGrid grid{9, 9, 2, 10};  // stackelberg, noise, one-step
  double lambda = 0.0;           // one-step entropy weight
  double inverse_beta = 1.0;     // one-step inverse-planning rationality
  double noise_fraction = 0.1;   // noise: sigma as a fraction of each axis range
};

struct ScenarioConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "scenario";
  std::string environment;            // highway | driving | intersection | circle | robot
  nlohmann::json environment_overrides = nlohmann::json::object();
  std::string human;                  // registered human model id
  nlohmann::json human_overrides = nlohmann::json::object();
  std::vector<double> rule_prior;     // empty = uniform
  std::vector<AlgorithmSpec> algorithms;
  int interactions = 100;
  int timesteps = 10;
  int humans = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "results";
  std::string pair_by = "human";      // human | interaction
  long long horizon_cap = 1000000;

  // Throws ConfigurationError naming the offending field.
  void validate() const;
};

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::string& path);

std::vector<std::string> registered_environments();
std::vector<std::string> registered_humans();
std::vector<std::string> registered_algorithms();

struct World {
  std::shared_ptr<const Environment> env;
  std::shared_ptr<const HumanModel> human;
  GenerativeModel model;
};

std::shared_ptr<const Environment> make_environment(const std::string& id, int timesteps,
                                                    int interactions,
                                                    const nlohmann::json& overrides = {});
// Robot reward used for planning and metrics in each environment.
RewardSpec default_reward(const std::string& environment_id);
// Reward the simulated human optimizes, where the model has one.
RewardSpec default_human_reward(const std::string& environment_id);
World make_world(const ScenarioConfig& cfg);

std::vector<std::string> builtin_scenarios();
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace influence
