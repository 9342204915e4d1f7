#include "influence/human/rule_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "influence/core/errors.hpp"

namespace influence {

using geometry::wrap_angle;

SwitchingRuleHuman::SwitchingRuleHuman(std::shared_ptr<const Environment> env,
                                       SwitchingOptions opts)
    : env_(std::move(env)), opts_(opts) {
  if (opts_.loss_threshold < 1) throw ConfigurationError("loss threshold must be >= 1");
  if (opts_.switch_probability < 0 || opts_.switch_probability > 1) {
    throw ConfigurationError("switch probability must lie in [0, 1]");
  }
  if (opts_.beta < 0) throw ConfigurationError("rationality beta must be nonnegative");
}

LatentStrategy SwitchingRuleHuman::short_term(const Transition& tr, const LatentStrategy& z,
                                              const AdaptationRule& phi) const {
  validate_rule(phi);
  if (!env_->epochs().is_boundary(tr.to.timestep)) return z;
  return apply_rule(phi.rule_id, tr.to, z);
}

std::vector<RuleOutcome> SwitchingRuleHuman::long_term_outcomes(const Transition& tr,
                                                                const AdaptationRule& phi) const {
  validate_rule(phi);
  if (!env_->epochs().is_boundary(tr.to.timestep)) return {{phi, 1.0}};
  const bool lost = env_->influence_success(tr.to);
  AdaptationRule next = phi;
  next.memory[0] = lost ? phi.memory[0] + 1.0 : 0.0;
  if (next.memory[0] < opts_.loss_threshold) return {{next, 1.0}};

  AdaptationRule switched = next;
  switched.rule_id = (phi.rule_id + 1) % kRules;
  switched.memory[0] = 0.0;
  if (opts_.switch_probability >= 1.0) return {{switched, 1.0}};
  AdaptationRule stay = next;
  stay.memory[0] = 0.0;
  if (opts_.switch_probability <= 0.0) return {{stay, 1.0}};
  return {{switched, opts_.switch_probability}, {stay, 1.0 - opts_.switch_probability}};
}

AdaptationRule SwitchingRuleHuman::initial_rule(int rule_id) const {
  AdaptationRule phi;
  phi.rule_id = rule_id;
  phi.memory = {0.0};
  validate_rule(phi);
  return phi;
}

// ---------------------------------------------------------------- circle

CircleHuman::CircleHuman(std::shared_ptr<const CircleEnv> env, SwitchingOptions opts)
    : SwitchingRuleHuman(env, opts), circle_(std::move(env)) {}

std::string CircleHuman::rule_name(int rule_id) const {
  static const char* kNames[] = {"antipode-of-robot", "offset-from-robot", "stay-put"};
  return kNames[rule_id];
}

HumanAction CircleHuman::policy(const SystemState& s, const LatentStrategy& z) const {
  const auto& p = circle_->params();
  const double err = wrap_angle(z.value - circle_->evader_angle(s));
  const double v = std::clamp(p.radius * err / p.dt, -p.evader_speed, p.evader_speed);
  return {{v}};
}

std::vector<LatentStrategy> CircleHuman::strategy_candidates() const {
  std::vector<LatentStrategy> out;
  for (int k = 0; k < 8; ++k) out.push_back({wrap_angle(k * std::numbers::pi / 4.0)});
  return out;
}

LatentStrategy CircleHuman::revealed_strategy(const SystemState& end, const LatentStrategy&) const {
  return {circle_->evader_angle(end)};
}

LatentStrategy CircleHuman::apply_rule(int rule, const SystemState& end,
                                       const LatentStrategy&) const {
  const double robot_angle = circle_->pursuer_angle(end);
  switch (rule) {
    case 0: return {wrap_angle(robot_angle + std::numbers::pi)};
    case 1: return {wrap_angle(robot_angle + std::numbers::pi / 2.0)};
    case 2: return {circle_->evader_angle(end)};
  }
  throw ConfigurationError("circle: unknown rule " + std::to_string(rule));
}

// ---------------------------------------------------------------- driving

DrivingHuman::DrivingHuman(std::shared_ptr<const DrivingEnv> env, SwitchingOptions opts)
    : SwitchingRuleHuman(env, opts), driving_(std::move(env)) {
  if (driving_->scenario() != DrivingScenario::kHighwayPass) {
    throw ConfigurationError("driving-rules requires the highway-pass scenario");
  }
}

std::string DrivingHuman::rule_name(int rule_id) const {
  static const char* kNames[] = {"merge-into-robot-lane", "merge-away-from-robot-lane", "keep-lane"};
  return kNames[rule_id];
}

HumanAction DrivingHuman::policy(const SystemState& s, const LatentStrategy& z) const {
  const VehicleState h = DrivingEnv::human(s);
  return {driving_->follow(h, driving_->road_axis_human(), driving_->lane_center(z.index()), 0.0)};
}

std::vector<LatentStrategy> DrivingHuman::strategy_candidates() const {
  std::vector<LatentStrategy> out;
  for (int l = 0; l < driving_->params().lanes; ++l) out.push_back(LatentStrategy::of_index(l));
  return out;
}

LatentStrategy DrivingHuman::revealed_strategy(const SystemState& end, const LatentStrategy&) const {
  return LatentStrategy::of_index(driving_->nearest_lane(end.values[DrivingEnv::kHX]));
}

LatentStrategy DrivingHuman::apply_rule(int rule, const SystemState& end,
                                        const LatentStrategy&) const {
  const int robot_lane = driving_->nearest_lane(end.values[DrivingEnv::kRX]);
  const int human_lane = driving_->nearest_lane(end.values[DrivingEnv::kHX]);
  const int lanes = driving_->params().lanes;
  switch (rule) {
    case 0: return LatentStrategy::of_index(robot_lane);
    case 1: return LatentStrategy::of_index((robot_lane + 1) % lanes);
    case 2: return LatentStrategy::of_index(human_lane);
  }
  throw ConfigurationError("driving: unknown rule " + std::to_string(rule));
}

// ---------------------------------------------------------------- reaching

ReachingHuman::ReachingHuman(std::shared_ptr<const ReachingEnv> env, SwitchingOptions opts)
    : SwitchingRuleHuman(env, opts), reaching_(std::move(env)) {}

std::string ReachingHuman::rule_name(int rule_id) const {
  static const char* kNames[] = {"shift-left", "shift-right", "repeat-previous"};
  return kNames[rule_id];
}

HumanAction ReachingHuman::policy(const SystemState& s, const LatentStrategy& z) const {
  return {reaching_->move_toward(s, ReachingEnv::kHX, reaching_->goal(z.index()),
                                 reaching_->params().human_speed)};
}

std::vector<LatentStrategy> ReachingHuman::strategy_candidates() const {
  std::vector<LatentStrategy> out;
  for (int g = 0; g < ReachingEnv::kGoals; ++g) out.push_back(LatentStrategy::of_index(g));
  return out;
}

LatentStrategy ReachingHuman::revealed_strategy(const SystemState& end, const LatentStrategy&) const {
  return LatentStrategy::of_index(reaching_->human_goal(end));
}

LatentStrategy ReachingHuman::apply_rule(int rule, const SystemState& end,
                                         const LatentStrategy&) const {
  constexpr int n = ReachingEnv::kGoals;
  const int previous = reaching_->human_goal(end);
  switch (rule) {
    case 0: return LatentStrategy::of_index((previous + n - 1) % n);
    case 1: return LatentStrategy::of_index((previous + 1) % n);
    case 2: return LatentStrategy::of_index(previous);
  }
  throw ConfigurationError("reaching: unknown rule " + std::to_string(rule));
}

// ---------------------------------------------------------------- intersection

IntersectionHuman::IntersectionHuman(std::shared_ptr<const DrivingEnv> env, SwitchingOptions opts)
    : SwitchingRuleHuman(env, opts), driving_(std::move(env)) {
  if (driving_->scenario() != DrivingScenario::kIntersection) {
    throw ConfigurationError("intersection-rules requires the intersection scenario");
  }
}

std::string IntersectionHuman::rule_name(int rule_id) const {
  static const char* kNames[] = {"yield-after-robot-first", "always-go", "alternate"};
  return kNames[rule_id];
}

HumanAction IntersectionHuman::policy(const SystemState& s, const LatentStrategy& z) const {
  const auto& p = driving_->params();
  const VehicleState h = DrivingEnv::human(s);
  const VehicleState r = DrivingEnv::robot(s);
  double target = p.block_speed_max;
  const double half_box = 0.5 * p.lane_width;
  const bool robot_cleared = r.x - 0.5 * p.vehicle_length > half_box;
  const bool human_committed = h.y + 0.5 * p.vehicle_length >= -half_box;
  if (z.index() == 1 && !robot_cleared && !human_committed) {
    const double stop_line = -half_box - 0.5 * p.vehicle_length - 0.5;
    target = std::clamp(1.5 * (stop_line - h.y), 0.0, p.block_speed_max);
  }
  return {driving_->follow(h, driving_->road_axis_human(), 0.0, driving_->speed_control(h, target))};
}

std::vector<LatentStrategy> IntersectionHuman::strategy_candidates() const {
  return {LatentStrategy::of_index(0), LatentStrategy::of_index(1)};
}

LatentStrategy IntersectionHuman::revealed_strategy(const SystemState& end,
                                                    const LatentStrategy&) const {
  return LatentStrategy::of_index(driving_->influence_success(end) ? 1 : 0);
}

LatentStrategy IntersectionHuman::apply_rule(int rule, const SystemState& end,
                                             const LatentStrategy& z) const {
  const bool robot_first = driving_->influence_success(end);
  switch (rule) {
    case 0: return LatentStrategy::of_index(robot_first ? 1 : 0);
    case 1: return LatentStrategy::of_index(0);
    case 2: return LatentStrategy::of_index(revealed_strategy(end, z).index() == 1 ? 0 : 1);
  }
  throw ConfigurationError("intersection: unknown rule " + std::to_string(rule));
}

}  // namespace influence
