#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "influence/core/rng.hpp"
#include "influence/core/types.hpp"

namespace influence {

class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view name() const = 0;
  virtual EpochStructure epochs() const = 0;
  virtual double dt() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual const ActionBounds& robot_bounds() const = 0;
  virtual const ActionBounds& human_bounds() const = 0;

  virtual SystemState reset(Rng& rng) const = 0;
  // Start state of the next interaction given the previous one's end state.
  virtual SystemState begin_interaction(const SystemState& end, Rng& rng) const = 0;

  virtual SystemState step_dynamics(const SystemState& s, const RobotAction& a_r,
                                    const HumanAction& a_h) const = 0;
  virtual bool detect_collision(const SystemState& s) const = 0;

  virtual double robot_reward(const SystemState& s, const RewardSpec& theta) const = 0;
  virtual double human_score(const SystemState& s, const RewardSpec& theta) const = 0;

  virtual bool influence_success(const SystemState& interaction_end) const = 0;
  // Net human displacement along its road axis; zero where undefined.
  virtual double lane_progress(const SystemState& start, const SystemState& end) const {
    (void)start;
    (void)end;
    return 0.0;
  }

  // Closed-loop robot primitives searched by the planners.
  virtual int robot_option_count() const = 0;
  virtual RobotAction robot_option(int option, const SystemState& s) const = 0;
  virtual std::string robot_option_name(int option) const { return std::to_string(option); }
  // Option used by default rollouts and as the "no plan yet" prediction.
  virtual int default_robot_option(const SystemState& s) const {
    (void)s;
    return 0;
  }
};

}  // namespace influence
