#include "influence/env/reaching.hpp"

#include <cmath>

#include "influence/core/errors.hpp"

namespace influence {

ReachingEnv::ReachingEnv(ReachingParams params) : p_(params) {
  if (!(p_.dt > 0) || !(p_.goal_spacing > 0) || !(p_.robot_speed > 0) || !(p_.human_speed > 0) ||
      p_.timesteps < 1 || p_.interactions < 1) {
    throw ConfigurationError("reaching environment: invalid constants");
  }
  const double r = p_.robot_speed;
  const double h = p_.human_speed;
  robot_bounds_.lower = {-r, -r, -r};
  robot_bounds_.upper = {r, r, r};
  human_bounds_.lower = {-h, -h, -h};
  human_bounds_.upper = {h, h, h};
}

std::array<double, 3> ReachingEnv::goal(int index) const {
  auto g = p_.goal_center;
  g[0] += (index - 1) * p_.goal_spacing;
  return g;
}

int ReachingEnv::nearest_goal(const SystemState& s, int c) const {
  int best = 0;
  double best_d = INFINITY;
  for (int k = 0; k < kGoals; ++k) {
    const auto g = goal(k);
    const double d = std::hypot(s.values[c] - g[0], s.values[c + 1] - g[1], s.values[c + 2] - g[2]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

double ReachingEnv::hand_distance(const SystemState& s) const {
  return std::hypot(s.values[kRX] - s.values[kHX], s.values[kRY] - s.values[kHY],
                    s.values[kRZ] - s.values[kHZ]);
}

SystemState ReachingEnv::reset(Rng& rng) const {
  (void)rng;
  SystemState s;
  s.values.resize(6, 0.0);
  for (int i = 0; i < 3; ++i) {
    s.values[kRX + i] = p_.robot_home[i];
    s.values[kHX + i] = p_.human_home[i];
  }
  s.collision = detect_collision(s);
  s.collided_this_interaction = s.collision;
  return s;
}

SystemState ReachingEnv::begin_interaction(const SystemState& end, Rng& rng) const {
  SystemState s = reset(rng);
  s.timestep = end.timestep;
  return s;
}

SystemState ReachingEnv::step_dynamics(const SystemState& s, const RobotAction& a_r,
                                       const HumanAction& a_h) const {
  if (a_r.values.size() != 3 || a_h.values.size() != 3) {
    throw ModelError("reaching step: actions are 3-D velocities");
  }
  if (!is_finite(s) || !is_finite(a_r.values) || !is_finite(a_h.values)) {
    throw ModelError("reaching step: non-finite input");
  }
  const ActionVector ar = robot_bounds_.clamp(a_r.values);
  const ActionVector ah = human_bounds_.clamp(a_h.values);
  SystemState n = s;
  for (int i = 0; i < 3; ++i) {
    n.values[kRX + i] += ar[i] * p_.dt;
    n.values[kHX + i] += ah[i] * p_.dt;
  }
  n.timestep = s.timestep + 1;
  n.collision = detect_collision(n);
  n.collided_this_interaction = s.collided_this_interaction || n.collision;
  return n;
}

bool ReachingEnv::detect_collision(const SystemState& s) const {
  return hand_distance(s) <= 2.0 * p_.hand_radius;
}

double ReachingEnv::robot_reward(const SystemState& s, const RewardSpec& theta) const {
  if (theta.kind != RewardKind::kNegativeDistance) {
    throw ConfigurationError("reaching environment supports only the negative-distance reward");
  }
  return -theta.speed_weight * hand_distance(s);
}

double ReachingEnv::human_score(const SystemState& s, const RewardSpec& theta) const {
  return -theta.speed_weight * hand_distance(s);
}

bool ReachingEnv::influence_success(const SystemState& end) const {
  return human_goal(end) == robot_goal(end);
}

ActionVector ReachingEnv::move_toward(const SystemState& s, int c, const std::array<double, 3>& t,
                                      double max_speed) const {
  const double dx = t[0] - s.values[c];
  const double dy = t[1] - s.values[c + 1];
  const double dz = t[2] - s.values[c + 2];
  const double d = std::hypot(dx, dy, dz);
  if (d < 1e-12) return {0.0, 0.0, 0.0};
  const double v = std::fmin(max_speed, d / p_.dt);
  return {v * dx / d, v * dy / d, v * dz / d};
}

RobotAction ReachingEnv::robot_option(int option, const SystemState& s) const {
  if (option < 0 || option >= robot_option_count()) {
    throw ConfigurationError("reaching: robot option out of range");
  }
  if (option < kGoals) return {move_toward(s, kRX, goal(option), p_.robot_speed), option};
  if (option == kGoals) {
    const std::array<double, 3> hand{s.values[kHX], s.values[kHY], s.values[kHZ]};
    return {move_toward(s, kRX, hand, p_.robot_speed), option};
  }
  return {{0.0, 0.0, 0.0}, option};
}

std::string ReachingEnv::robot_option_name(int option) const {
  if (option < kGoals) return "goal-" + std::to_string(option);
  return option == kGoals ? "follow-hand" : "hold";
}

int ReachingEnv::default_robot_option(const SystemState& s) const {
  (void)s;
  return kGoals + 1;
}

}  // namespace influence
