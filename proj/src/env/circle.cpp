#include "influence/env/circle.hpp"

#include <cmath>
#include <numbers>

#include "influence/core/errors.hpp"

namespace influence {

using geometry::Vec2;
using geometry::wrap_angle;

namespace {

constexpr int kAbsoluteTargets = 8;
constexpr int kRelativeOffsets = 4;
// Options: 8 absolute rim angles, 4 offsets from the evader, 4 offsets from
// the pursuer's previous end angle, and stop.
constexpr int kOptionCount = kAbsoluteTargets + 2 * kRelativeOffsets + 1;

double relative_offset(int k) { return k * std::numbers::pi / 2.0; }

}  // namespace

CircleEnv::CircleEnv(CircleParams params) : p_(params) {
  if (!(p_.dt > 0) || !(p_.radius > 0) || !(p_.capture_radius > 0) || p_.timesteps < 1 ||
      p_.interactions < 1) {
    throw ConfigurationError("circle environment: invalid constants");
  }
  robot_bounds_.lower = {-p_.pursuer_speed, -p_.pursuer_speed};
  robot_bounds_.upper = {p_.pursuer_speed, p_.pursuer_speed};
  human_bounds_.lower = {-p_.evader_speed};
  human_bounds_.upper = {p_.evader_speed};
}

double CircleEnv::evader_angle(const SystemState& s) const {
  return std::atan2(s.values[kEY], s.values[kEX]);
}

double CircleEnv::pursuer_angle(const SystemState& s) const {
  return std::atan2(s.values[kPY], s.values[kPX]);
}

double CircleEnv::previous_pursuer_angle(const SystemState& s) const {
  return std::atan2(s.values[kPrevY], s.values[kPrevX]);
}

double CircleEnv::distance(const SystemState& s) const {
  return std::hypot(s.values[kPX] - s.values[kEX], s.values[kPY] - s.values[kEY]);
}

SystemState CircleEnv::reset(Rng& rng) const {
  SystemState s;
  s.values.resize(6, 0.0);
  const double theta = uniform(rng, -std::numbers::pi, std::numbers::pi);
  s.values[kEX] = p_.radius * std::cos(theta);
  s.values[kEY] = p_.radius * std::sin(theta);
  s.values[kPrevX] = s.values[kEX];
  s.values[kPrevY] = s.values[kEY];
  s.collision = detect_collision(s);
  s.collided_this_interaction = s.collision;
  return s;
}

SystemState CircleEnv::begin_interaction(const SystemState& end, Rng& rng) const {
  (void)rng;
  SystemState s = end;
  s.values[kPrevX] = end.values[kPX];
  s.values[kPrevY] = end.values[kPY];
  s.values[kPX] = 0.0;
  s.values[kPY] = 0.0;
  s.collision = detect_collision(s);
  s.off_road = false;
  s.collided_this_interaction = s.collision;
  return s;
}

SystemState CircleEnv::step_dynamics(const SystemState& s, const RobotAction& a_r,
                                     const HumanAction& a_h) const {
  if (a_r.values.size() != 2 || a_h.values.size() != 1) {
    throw ModelError("circle step: robot action is (vx, vy), human action is tangential speed");
  }
  if (!is_finite(s) || !is_finite(a_r.values) || !is_finite(a_h.values)) {
    throw ModelError("circle step: non-finite input");
  }
  const ActionVector ar = robot_bounds_.clamp(a_r.values);
  const ActionVector ah = human_bounds_.clamp(a_h.values);
  SystemState n = s;
  double px = s.values[kPX] + ar[0] * p_.dt;
  double py = s.values[kPY] + ar[1] * p_.dt;
  const double r = std::hypot(px, py);
  if (r > p_.radius) {
    px *= p_.radius / r;
    py *= p_.radius / r;
  }
  n.values[kPX] = px;
  n.values[kPY] = py;
  if (ah[0] != 0.0) {
    const double theta = evader_angle(s) + ah[0] * p_.dt / p_.radius;
    n.values[kEX] = p_.radius * std::cos(theta);
    n.values[kEY] = p_.radius * std::sin(theta);
  }
  n.timestep = s.timestep + 1;
  n.collision = detect_collision(n);
  n.off_road = false;
  n.collided_this_interaction = s.collided_this_interaction || n.collision;
  return n;
}

bool CircleEnv::detect_collision(const SystemState& s) const {
  return distance(s) <= 2.0 * p_.agent_radius;
}

double CircleEnv::robot_reward(const SystemState& s, const RewardSpec& theta) const {
  if (theta.kind != RewardKind::kNegativeDistance) {
    throw ConfigurationError("circle environment supports only the negative-distance reward");
  }
  return -theta.speed_weight * distance(s);
}

double CircleEnv::human_score(const SystemState& s, const RewardSpec& theta) const {
  return theta.speed_weight * distance(s);
}

bool CircleEnv::influence_success(const SystemState& end) const {
  return distance(end) < p_.capture_radius;
}

int CircleEnv::robot_option_count() const { return kOptionCount; }

ActionVector CircleEnv::pursue_point(const SystemState& s, Vec2 target) const {
  const Vec2 p{s.values[kPX], s.values[kPY]};
  const Vec2 d = target - p;
  const double dist = geometry::norm(d);
  if (dist < 1e-12) return {0.0, 0.0};
  const double speed = std::fmin(p_.pursuer_speed, dist / p_.dt);
  return {speed * d.x / dist, speed * d.y / dist};
}

RobotAction CircleEnv::robot_option(int option, const SystemState& s) const {
  if (option < 0 || option >= kOptionCount) {
    throw ConfigurationError("circle: robot option out of range");
  }
  if (option == kOptionCount - 1) return {{0.0, 0.0}, option};
  double angle;
  if (option < kAbsoluteTargets) {
    angle = option * 2.0 * std::numbers::pi / kAbsoluteTargets;
  } else if (option < kAbsoluteTargets + kRelativeOffsets) {
    angle = evader_angle(s) + relative_offset(option - kAbsoluteTargets);
  } else {
    angle = previous_pursuer_angle(s) +
            relative_offset(option - kAbsoluteTargets - kRelativeOffsets);
  }
  const Vec2 target{p_.radius * std::cos(angle), p_.radius * std::sin(angle)};
  return {pursue_point(s, target), option};
}

std::string CircleEnv::robot_option_name(int option) const {
  if (option == kOptionCount - 1) return "stop";
  if (option < kAbsoluteTargets) return "rim-" + std::to_string(option * 45) + "deg";
  if (option < kAbsoluteTargets + kRelativeOffsets) {
    return "evader+" + std::to_string((option - kAbsoluteTargets) * 90) + "deg";
  }
  return "previous+" + std::to_string((option - kAbsoluteTargets - kRelativeOffsets) * 90) + "deg";
}

int CircleEnv::default_robot_option(const SystemState& s) const {
  (void)s;
  return kAbsoluteTargets;  // chase the evader
}

}  // namespace influence
