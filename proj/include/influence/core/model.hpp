#pragma once

#include <memory>
#include <string>

#include "influence/core/environment.hpp"
#include "influence/core/human_model.hpp"
#include "influence/core/rng.hpp"
#include "influence/core/types.hpp"

namespace influence {

struct StepResult {
  AugmentedState next;
  Observation obs;
  double reward = 0.0;
  bool interaction_ended = false;
};

class GenerativeModel {
 public:
  GenerativeModel(std::shared_ptr<const Environment> env, std::shared_ptr<const HumanModel> human,
                  RewardSpec reward);

  StepResult step(const AugmentedState& x, const RobotAction& a_r, Rng& rng) const;

  // Applies one closed-loop option for up to `steps` timesteps, stopping
  // early at an interaction boundary or the episode end.
  struct MacroResult {
    StepResult last;
    double reward = 0.0;
    int steps = 0;
  };
  MacroResult step_option(const AugmentedState& x, int option, int steps, Rng& rng) const;

  const Environment& env() const { return *env_; }
  const HumanModel& human() const { return *human_; }
  std::shared_ptr<const Environment> env_ptr() const { return env_; }
  std::shared_ptr<const HumanModel> human_ptr() const { return human_; }
  const RewardSpec& reward() const { return reward_; }
  EpochStructure epochs() const { return env_->epochs(); }

 private:
  std::shared_ptr<const Environment> env_;
  std::shared_ptr<const HumanModel> human_;
  RewardSpec reward_;
};

GenerativeModel compose_model(std::shared_ptr<const Environment> env,
                              std::shared_ptr<const HumanModel> human, RewardSpec reward);

double cumulative_reward(const Trajectory& traj, const RewardSpec& reward, const Environment& env);

double cumulative_human_score(const Trajectory& traj, const RewardSpec& theta_h,
                              const Environment& env);

bool influence_success(const InteractionLog& log, const Environment& env);

// Hex-float text form, exact for every finite double.
std::string serialize(const SystemState& s);
std::string serialize(const AugmentedState& x);

}  // namespace influence
