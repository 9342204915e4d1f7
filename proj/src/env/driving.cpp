#include "influence/env/driving.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "influence/core/errors.hpp"

namespace influence {

using geometry::OrientedBox;
using geometry::wrap_angle;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

DrivingParams DrivingParams::highway_block() {
  DrivingParams p;
  p.scenario = DrivingScenario::kHighwayBlock;
  p.lateral_targets = {2.0, 4.0, 6.0};
  return p;
}

DrivingParams DrivingParams::highway_pass() {
  DrivingParams p;
  p.scenario = DrivingScenario::kHighwayPass;
  p.timesteps = 10;
  p.interactions = 100;
  p.dt = 0.2;
  p.lateral_targets = {2.0, 6.0};
  p.accel_levels = {-4.0, 0.0};
  return p;
}

DrivingParams DrivingParams::intersection() {
  DrivingParams p;
  p.scenario = DrivingScenario::kIntersection;
  p.timesteps = 40;
  p.interactions = 20;
  p.lanes = 1;
  p.lateral_targets = {0.0};
  p.accel_levels = {-4.0, 0.0, 3.0};
  return p;
}

DrivingEnv::DrivingEnv(DrivingParams params) : p_(std::move(params)) {
  if (!(p_.dt > 0) || p_.timesteps < 1 || p_.interactions < 1 || !(p_.lane_width > 0) ||
      !(p_.vehicle_length > 0) || !(p_.vehicle_width > 0) || !(p_.v_max > 0)) {
    throw ConfigurationError("driving environment: invalid geometry or timing constants");
  }
  if (p_.lateral_targets.empty() || p_.accel_levels.empty()) {
    throw ConfigurationError("driving environment: empty option grid");
  }
  bounds_.lower = {-p_.max_steer, -p_.max_accel};
  bounds_.upper = {p_.max_steer, p_.max_accel};
}

std::string_view DrivingEnv::name() const {
  switch (p_.scenario) {
    case DrivingScenario::kHighwayBlock: return "highway";
    case DrivingScenario::kHighwayPass: return "driving";
    case DrivingScenario::kIntersection: return "intersection";
  }
  return "driving";
}

std::size_t DrivingEnv::state_dim() const {
  return p_.scenario == DrivingScenario::kIntersection ? 10 : 8;
}

VehicleState DrivingEnv::robot(const SystemState& s) {
  return {s.values[kRX], s.values[kRY], s.values[kRH], s.values[kRV]};
}

VehicleState DrivingEnv::human(const SystemState& s) {
  return {s.values[kHX], s.values[kHY], s.values[kHH], s.values[kHV]};
}

void DrivingEnv::set_robot(SystemState& s, const VehicleState& v) {
  s.values[kRX] = v.x;
  s.values[kRY] = v.y;
  s.values[kRH] = v.heading;
  s.values[kRV] = v.speed;
}

void DrivingEnv::set_human(SystemState& s, const VehicleState& v) {
  s.values[kHX] = v.x;
  s.values[kHY] = v.y;
  s.values[kHH] = v.heading;
  s.values[kHV] = v.speed;
}

double DrivingEnv::lane_center(int lane) const { return (lane + 0.5) * p_.lane_width; }

int DrivingEnv::nearest_lane(double x) const {
  int lane = static_cast<int>(std::floor(x / p_.lane_width));
  return std::clamp(lane, 0, p_.lanes - 1);
}

double DrivingEnv::road_axis_robot() const {
  return p_.scenario == DrivingScenario::kIntersection ? 0.0 : kHalfPi;
}

double DrivingEnv::road_axis_human() const { return kHalfPi; }

OrientedBox DrivingEnv::footprint(const VehicleState& v) const {
  return {{v.x, v.y}, v.heading, p_.vehicle_length, p_.vehicle_width};
}

bool DrivingEnv::detect_collision(const SystemState& s) const {
  return geometry::overlaps(footprint(robot(s)), footprint(human(s)));
}

bool DrivingEnv::human_off_road(const SystemState& s) const {
  const double half = 0.5 * p_.vehicle_width;
  const double x = s.values[kHX];
  if (p_.scenario == DrivingScenario::kIntersection) {
    return std::fabs(x) + half > 0.5 * p_.lane_width;
  }
  return x - half < 0.0 || x + half > p_.lanes * p_.lane_width;
}

bool DrivingEnv::in_conflict_box(const VehicleState& v, bool along_x) const {
  const double half_box = 0.5 * p_.lane_width;
  const double c = along_x ? v.x : v.y;
  return c + 0.5 * p_.vehicle_length >= -half_box && c - 0.5 * p_.vehicle_length <= half_box;
}

SystemState DrivingEnv::reset(Rng& rng) const {
  SystemState s;
  s.values.resize(state_dim(), 0.0);
  switch (p_.scenario) {
    case DrivingScenario::kHighwayBlock: {
      const int h_lane = uniform_int(rng, 0, p_.lanes - 1);
      const int r_lane = uniform_int(rng, 0, p_.lanes - 1);
      const double gap = uniform(rng, p_.block_gap_min, p_.block_gap_max);
      const double vh = uniform(rng, p_.block_speed_min, p_.block_speed_max);
      const double vr = uniform(rng, p_.block_speed_min, p_.block_speed_max);
      set_human(s, {lane_center(h_lane), 0.0, kHalfPi, vh});
      set_robot(s, {lane_center(r_lane), gap, kHalfPi, vr});
      break;
    }
    case DrivingScenario::kHighwayPass: {
      const int r_lane = uniform_int(rng, 0, p_.lanes - 1);
      set_robot(s, {lane_center(r_lane), 0.0, kHalfPi, p_.pass_robot_speed});
      set_human(s, {0.5 * p_.lanes * p_.lane_width, p_.pass_human_gap, kHalfPi,
                    p_.pass_human_speed});
      break;
    }
    case DrivingScenario::kIntersection: {
      const double dr = uniform(rng, p_.approach_min, p_.approach_max);
      const double dh = uniform(rng, p_.approach_min, p_.approach_max);
      const double vr = uniform(rng, p_.block_speed_min, p_.block_speed_max);
      const double vh = uniform(rng, p_.block_speed_min, p_.block_speed_max);
      set_robot(s, {-dr, 0.0, 0.0, vr});
      set_human(s, {0.0, -dh, kHalfPi, vh});
      s.values[kRobotEnter] = -1.0;
      s.values[kHumanEnter] = -1.0;
      break;
    }
  }
  s.collision = detect_collision(s);
  s.off_road = human_off_road(s);
  s.collided_this_interaction = s.collision;
  return s;
}

SystemState DrivingEnv::begin_interaction(const SystemState& end, Rng& rng) const {
  SystemState s;
  if (p_.scenario == DrivingScenario::kHighwayPass) {
    s = end;
    const int r_lane = nearest_lane(end.values[kRX]);
    set_robot(s, {lane_center(r_lane), 0.0, kHalfPi, p_.pass_robot_speed});
    set_human(s, {0.5 * p_.lanes * p_.lane_width, p_.pass_human_gap, kHalfPi,
                  p_.pass_human_speed});
  } else {
    s = reset(rng);
  }
  s.timestep = end.timestep;
  s.collision = detect_collision(s);
  s.off_road = human_off_road(s);
  s.collided_this_interaction = s.collision;
  return s;
}

VehicleState DrivingEnv::integrate(const VehicleState& v, double steer, double accel) const {
  VehicleState n = v;
  n.heading = wrap_angle(v.heading + steer * p_.dt);
  n.speed = std::clamp(v.speed + accel * p_.dt, -p_.v_max, p_.v_max);
  n.x = v.x + n.speed * std::cos(n.heading) * p_.dt;
  n.y = v.y + n.speed * std::sin(n.heading) * p_.dt;
  return n;
}

SystemState DrivingEnv::step_dynamics(const SystemState& s, const RobotAction& a_r,
                                      const HumanAction& a_h) const {
  if (a_r.values.size() != 2 || a_h.values.size() != 2) {
    throw ModelError("driving step: actions must be (steering, accel)");
  }
  if (!is_finite(s) || !is_finite(a_r.values) || !is_finite(a_h.values)) {
    throw ModelError("driving step: non-finite input");
  }
  const ActionVector ar = bounds_.clamp(a_r.values);
  const ActionVector ah = bounds_.clamp(a_h.values);
  SystemState n = s;
  set_robot(n, integrate(robot(s), ar[0], ar[1]));
  set_human(n, integrate(human(s), ah[0], ah[1]));
  n.timestep = s.timestep + 1;
  if (p_.scenario == DrivingScenario::kIntersection) {
    const double tick = n.timestep % p_.timesteps == 0 ? p_.timesteps : n.timestep % p_.timesteps;
    if (n.values[kRobotEnter] < 0 && in_conflict_box(robot(n), true)) n.values[kRobotEnter] = tick;
    if (n.values[kHumanEnter] < 0 && in_conflict_box(human(n), false)) n.values[kHumanEnter] = tick;
  }
  n.collision = detect_collision(n);
  n.off_road = human_off_road(n);
  n.collided_this_interaction = s.collided_this_interaction || n.collision;
  return n;
}

double DrivingEnv::robot_reward(const SystemState& s, const RewardSpec& theta) const {
  const double col = s.collision ? theta.collision_penalty : 0.0;
  const VehicleState r = robot(s);
  const VehicleState h = human(s);
  const double human_forward = h.speed * std::sin(h.heading);
  const double robot_forward = r.speed * std::cos(r.heading - road_axis_robot());
  switch (theta.kind) {
    case RewardKind::kSlowHuman: return -theta.speed_weight * human_forward - col;
    case RewardKind::kRobotProgress: return theta.speed_weight * robot_forward - col;
    case RewardKind::kHumanScore: return human_score(s, theta);
    case RewardKind::kNegativeDistance: return -std::hypot(r.x - h.x, r.y - h.y);
    case RewardKind::kTabular: break;
  }
  throw ConfigurationError("driving environment: unsupported reward kind");
}

double DrivingEnv::human_score(const SystemState& s, const RewardSpec& theta) const {
  const VehicleState h = human(s);
  const double forward = h.speed * std::sin(h.heading);
  return theta.speed_weight * forward - (s.collision ? theta.collision_penalty : 0.0) -
         (s.off_road ? theta.off_road_penalty : 0.0);
}

bool DrivingEnv::robot_blocks_human_lane(const SystemState& s) const {
  const VehicleState r = robot(s);
  const VehicleState h = human(s);
  if (r.y <= h.y) return false;
  const int lane = nearest_lane(h.x);
  const double lo = lane * p_.lane_width;
  const double hi = lo + p_.lane_width;
  const double overlap = std::min(hi, r.x + 0.5 * p_.vehicle_width) -
                         std::max(lo, r.x - 0.5 * p_.vehicle_width);
  return overlap > 0.5 * p_.vehicle_width;
}

bool DrivingEnv::influence_success(const SystemState& end) const {
  if (end.collided_this_interaction) return false;
  switch (p_.scenario) {
    case DrivingScenario::kHighwayPass:
    case DrivingScenario::kHighwayBlock:
      return nearest_lane(end.values[kHX]) != nearest_lane(end.values[kRX]);
    case DrivingScenario::kIntersection: {
      const double re = end.values[kRobotEnter];
      const double he = end.values[kHumanEnter];
      return re >= 0 && (he < 0 || re < he);
    }
  }
  return false;
}

double DrivingEnv::lane_progress(const SystemState& start, const SystemState& end) const {
  return end.values[kHY] - start.values[kHY];
}

double DrivingEnv::clamp_accel(const VehicleState& v, double accel) const {
  accel = std::clamp(accel, -p_.max_accel, p_.max_accel);
  // Braking stops at zero rather than reversing.
  if (v.speed >= 0 && accel < 0 && v.speed + accel * p_.dt < 0) accel = -v.speed / p_.dt;
  return accel;
}

double DrivingEnv::speed_control(const VehicleState& v, double target_speed) const {
  return clamp_accel(v, (target_speed - v.speed) / p_.dt);
}

ActionVector DrivingEnv::follow(const VehicleState& v, double axis, double target,
                                double accel, const LaneFollowGains& g) const {
  // Signed lateral error toward the target, measured to the left of travel.
  const bool along_y = std::fabs(axis - kHalfPi) < 1e-9;
  const double e_left = along_y ? -(target - v.x) : (target - v.y);
  const double desired = axis + std::clamp(g.lateral * e_left, -g.max_offset, g.max_offset);
  const double steer =
      std::clamp(g.heading * wrap_angle(desired - v.heading), -p_.max_steer, p_.max_steer);
  return {steer, clamp_accel(v, accel)};
}

int DrivingEnv::robot_option_count() const {
  return static_cast<int>(p_.lateral_targets.size() * p_.accel_levels.size());
}

RobotAction DrivingEnv::robot_option(int option, const SystemState& s) const {
  if (option < 0 || option >= robot_option_count()) {
    throw ConfigurationError("driving: robot option out of range");
  }
  const std::size_t na = p_.accel_levels.size();
  const double lateral = p_.lateral_targets[option / na];
  const double accel = p_.accel_levels[option % na];
  return {follow(robot(s), road_axis_robot(), lateral, accel), option};
}

HumanAction DrivingEnv::human_option(int option, const SystemState& s) const {
  const std::size_t na = p_.accel_levels.size();
  const double lateral = p_.lateral_targets[option / na];
  const double accel = p_.accel_levels[option % na];
  return {follow(human(s), road_axis_human(), lateral, accel)};
}

std::string DrivingEnv::robot_option_name(int option) const {
  const std::size_t na = p_.accel_levels.size();
  return "lateral=" + std::to_string(p_.lateral_targets[option / na]) +
         " accel=" + std::to_string(p_.accel_levels[option % na]);
}

int DrivingEnv::default_robot_option(const SystemState& s) const {
  // Hold the nearest lateral target at zero acceleration, if available.
  const VehicleState r = robot(s);
  const double lat = p_.scenario == DrivingScenario::kIntersection ? r.y : r.x;
  std::size_t best = 0;
  for (std::size_t i = 1; i < p_.lateral_targets.size(); ++i) {
    if (std::fabs(p_.lateral_targets[i] - lat) < std::fabs(p_.lateral_targets[best] - lat)) best = i;
  }
  std::size_t acc = 0;
  for (std::size_t i = 1; i < p_.accel_levels.size(); ++i) {
    if (std::fabs(p_.accel_levels[i]) < std::fabs(p_.accel_levels[acc])) acc = i;
  }
  return static_cast<int>(best * p_.accel_levels.size() + acc);
}

}  // namespace influence
