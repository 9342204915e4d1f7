#pragma once

#include "influence/core/environment.hpp"
#include "influence/env/geometry.hpp"

namespace influence {

struct CircleParams {
  int timesteps = 10;
  int interactions = 100;
  double dt = 0.2;
  double radius = 10.0;
  double capture_radius = 1.0;
  double agent_radius = 0.5;
  double pursuer_speed = 6.0;
  double evader_speed = 20.0;  // tangential, m/s
};

// Pursuer (robot) inside a disc, evader (human) on its rim.
class CircleEnv final : public Environment {
 public:
  // Layout: pursuer (x, y), evader (x, y), pursuer end position of the
  // previous interaction (x, y).
  enum Index { kPX = 0, kPY, kEX, kEY, kPrevX, kPrevY };

  explicit CircleEnv(CircleParams params = {});

  std::string_view name() const override { return "circle"; }
  EpochStructure epochs() const override { return {p_.timesteps, p_.interactions}; }
  double dt() const override { return p_.dt; }
  std::size_t state_dim() const override { return 6; }
  const ActionBounds& robot_bounds() const override { return robot_bounds_; }
  const ActionBounds& human_bounds() const override { return human_bounds_; }

  SystemState reset(Rng& rng) const override;
  SystemState begin_interaction(const SystemState& end, Rng& rng) const override;
  SystemState step_dynamics(const SystemState& s, const RobotAction& a_r,
                            const HumanAction& a_h) const override;
  bool detect_collision(const SystemState& s) const override;
  double robot_reward(const SystemState& s, const RewardSpec& theta) const override;
  double human_score(const SystemState& s, const RewardSpec& theta) const override;
  bool influence_success(const SystemState& interaction_end) const override;

  int robot_option_count() const override;
  RobotAction robot_option(int option, const SystemState& s) const override;
  std::string robot_option_name(int option) const override;
  int default_robot_option(const SystemState& s) const override;

  const CircleParams& params() const { return p_; }
  double evader_angle(const SystemState& s) const;
  double pursuer_angle(const SystemState& s) const;
  double previous_pursuer_angle(const SystemState& s) const;
  double distance(const SystemState& s) const;
  // Velocity moving the pursuer toward a rim point, capped to not overshoot.
  ActionVector pursue_point(const SystemState& s, geometry::Vec2 target) const;

 private:
  CircleParams p_;
  ActionBounds robot_bounds_;
  ActionBounds human_bounds_;
};

}  // namespace influence
