#pragma once

#include <array>

#include "influence/core/environment.hpp"

namespace influence {

struct ReachingParams {
  int timesteps = 10;
  int interactions = 100;
  double dt = 0.1;
  double goal_spacing = 0.3;
  std::array<double, 3> goal_center = {0.0, 0.5, 0.0};
  std::array<double, 3> robot_home = {0.0, 0.0, 0.3};
  std::array<double, 3> human_home = {0.0, 1.0, 0.3};
  double robot_speed = 0.8;
  double human_speed = 1.0;
  double hand_radius = 0.05;
};

// Shared tabletop: three goals on a line, robot and human hands moving in 3-D.
class ReachingEnv final : public Environment {
 public:
  static constexpr int kGoals = 3;
  // Layout: robot hand (x, y, z), human hand (x, y, z).
  enum Index { kRX = 0, kRY, kRZ, kHX, kHY, kHZ };

  explicit ReachingEnv(ReachingParams params = {});

  std::string_view name() const override { return "robot"; }
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

  int robot_option_count() const override { return kGoals + 2; }
  RobotAction robot_option(int option, const SystemState& s) const override;
  std::string robot_option_name(int option) const override;
  int default_robot_option(const SystemState& s) const override;

  const ReachingParams& params() const { return p_; }
  std::array<double, 3> goal(int index) const;
  int nearest_goal(const SystemState& s, int first_coord) const;
  int human_goal(const SystemState& s) const { return nearest_goal(s, kHX); }
  int robot_goal(const SystemState& s) const { return nearest_goal(s, kRX); }
  double hand_distance(const SystemState& s) const;
  // Velocity toward `target` with speed cap, not overshooting within dt.
  ActionVector move_toward(const SystemState& s, int first_coord, const std::array<double, 3>& target,
                           double max_speed) const;

 private:
  ReachingParams p_;
  ActionBounds robot_bounds_;
  ActionBounds human_bounds_;
};

}  // namespace influence
