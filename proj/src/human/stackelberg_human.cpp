#include "influence/human/stackelberg_human.hpp"

#include <algorithm>
#include <limits>

#include "influence/core/errors.hpp"

namespace influence {

int RoleState::merges() const {
  return static_cast<int>(std::count(merge_history.begin(), merge_history.end(), true));
}

Role role_for(const RoleState& state, int threshold) {
  if (state.crashed) return Role::kFollower;
  return state.merges() > threshold ? Role::kLeader : Role::kFollower;
}

std::vector<SystemState> rollout_option_blocks(const DrivingEnv& env, const SystemState& s,
                                               std::span<const int> robot_options,
                                               std::span<const int> human_options,
                                               int block_length) {
  if (robot_options.size() != human_options.size()) {
    throw ConfigurationError("option sequences differ in length");
  }
  std::vector<SystemState> out;
  out.reserve(robot_options.size() * block_length);
  SystemState cur = s;
  for (std::size_t b = 0; b < robot_options.size(); ++b) {
    for (int k = 0; k < block_length; ++k) {
      const RobotAction ar = env.robot_option(robot_options[b], cur);
      const HumanAction ah = env.human_option(human_options[b], cur);
      cur = env.step_dynamics(cur, ar, ah);
      out.push_back(cur);
    }
  }
  return out;
}

namespace {

double block_value(const DrivingEnv& env, const SystemState& s, int r, int h, int block_length,
                   const RewardSpec& theta, bool human_side) {
  double total = 0.0;
  SystemState cur = s;
  for (int k = 0; k < block_length; ++k) {
    const RobotAction ar = env.robot_option(r, cur);
    const HumanAction ah = env.human_option(h, cur);
    cur = env.step_dynamics(cur, ar, ah);
    total += human_side ? env.human_score(cur, theta) : env.robot_reward(cur, theta);
  }
  return total;
}

}  // namespace

HumanDecision stackelberg_human_act(const RoleState& history, const SystemState& s,
                                    int predicted_robot_option, const DrivingEnv& env,
                                    const StackelbergHumanOptions& opts, int threshold) {
  return decide_block(role_for(history, threshold), s, predicted_robot_option, env, opts);
}

HumanDecision decide_block(Role role, const SystemState& s, int predicted_robot_option,
                           const DrivingEnv& env, const StackelbergHumanOptions& opts) {
  const int n = env.robot_option_count();
  HumanDecision d;
  d.role = role;
  double best = -std::numeric_limits<double>::infinity();
  if (d.role == Role::kFollower) {
    for (int h = 0; h < n; ++h) {
      const double v = block_value(env, s, predicted_robot_option, h, opts.block_length,
                                   opts.human_reward, true);
      if (v > best) {
        best = v;
        d.option = h;
      }
    }
  } else {
    for (int h = 0; h < n; ++h) {
      int robot_br = 0;
      double robot_best = -std::numeric_limits<double>::infinity();
      for (int r = 0; r < n; ++r) {
        const double v = block_value(env, s, r, h, opts.block_length, opts.robot_reward, false);
        if (v > robot_best) {
          robot_best = v;
          robot_br = r;
        }
      }
      const double v = block_value(env, s, robot_br, h, opts.block_length, opts.human_reward, true);
      if (v > best) {
        best = v;
        d.option = h;
      }
    }
  }
  d.action = env.human_option(d.option, s);
  return d;
}

StackelbergHighwayHuman::StackelbergHighwayHuman(std::shared_ptr<const DrivingEnv> env,
                                                 StackelbergHumanOptions opts)
    : env_(std::move(env)), opts_(std::move(opts)) {
  if (env_->scenario() != DrivingScenario::kHighwayBlock) {
    throw ConfigurationError("stackelberg-human requires the highway scenario");
  }
  if (opts_.thresholds.empty()) throw ConfigurationError("stackelberg-human: empty rule family");
  if (opts_.block_length < 1 || env_->epochs().timesteps_per_interaction % opts_.block_length != 0) {
    throw ConfigurationError("stackelberg-human: block length must divide the interaction length");
  }
}

std::string StackelbergHighwayHuman::rule_name(int rule_id) const {
  return "leader-above-" + std::to_string(opts_.thresholds.at(rule_id)) + "-of-6";
}

HumanAction StackelbergHighwayHuman::policy(const SystemState& s, const LatentStrategy& z) const {
  return env_->human_option(z.index(), s);
}

RoleState StackelbergHighwayHuman::role_state(const AdaptationRule& phi) {
  RoleState r;
  for (int i = 0; i < kRoleWindow; ++i) r.merge_history[i] = phi.memory[kWindow + i] > 0.5;
  r.filled = static_cast<int>(phi.memory[kFilled]);
  r.crashed = phi.memory[kCrashedNow] > 0.5 || phi.memory[kCrashedLast] > 0.5;
  return r;
}

Role StackelbergHighwayHuman::role(const AdaptationRule& phi) {
  return phi.memory[kRole] > 0.5 ? Role::kLeader : Role::kFollower;
}

AdaptationRule StackelbergHighwayHuman::advance(const Transition& tr,
                                                const AdaptationRule& phi) const {
  validate_rule(phi);
  AdaptationRule n = phi;
  const bool merged = !env_->robot_blocks_human_lane(tr.from) && env_->robot_blocks_human_lane(tr.to);
  if (merged) n.memory[kMerged] = 1.0;
  if (tr.to.collision) {
    n.memory[kCrashedNow] = 1.0;
    n.memory[kRole] = static_cast<double>(Role::kFollower);
  }
  if (env_->epochs().is_boundary(tr.to.timestep)) {
    for (int i = 0; i + 1 < kRoleWindow; ++i) n.memory[kWindow + i] = n.memory[kWindow + i + 1];
    n.memory[kWindow + kRoleWindow - 1] = n.memory[kMerged];
    n.memory[kFilled] = std::min<double>(kRoleWindow, n.memory[kFilled] + 1.0);
    n.memory[kCrashedLast] = n.memory[kCrashedNow];
    n.memory[kCrashedNow] = 0.0;
    n.memory[kMerged] = 0.0;
    n.memory[kRole] = static_cast<double>(role_for(role_state(n), opts_.thresholds[n.rule_id]));
  }
  return n;
}

std::vector<RuleOutcome> StackelbergHighwayHuman::long_term_outcomes(const Transition& tr,
                                                                     const AdaptationRule& phi) const {
  return {{advance(tr, phi), 1.0}};
}

LatentStrategy StackelbergHighwayHuman::short_term(const Transition& tr, const LatentStrategy& z,
                                                   const AdaptationRule& phi) const {
  validate_rule(phi);
  if (tr.next.timestep % opts_.block_length != 0) return z;
  const AdaptationRule upcoming = advance(tr, phi);
  const bool new_interaction = env_->epochs().is_boundary(tr.to.timestep);
  int predicted = tr.robot.option;
  if (new_interaction || predicted < 0) predicted = env_->default_robot_option(tr.next);
  return LatentStrategy::of_index(decide_block(role(upcoming), tr.next, predicted, *env_, opts_).option);
}

AdaptationRule StackelbergHighwayHuman::initial_rule(int rule_id) const {
  AdaptationRule phi;
  phi.rule_id = rule_id;
  phi.memory.resize(kSize, 0.0);
  validate_rule(phi);
  return phi;
}

std::vector<LatentStrategy> StackelbergHighwayHuman::strategy_candidates() const {
  std::vector<LatentStrategy> out;
  for (int i = 0; i < env_->robot_option_count(); ++i) out.push_back(LatentStrategy::of_index(i));
  return out;
}

std::optional<LatentStrategy> StackelbergHighwayHuman::initial_strategy(
    const SystemState& s0, const AdaptationRule& phi) const {
  validate_rule(phi);
  return LatentStrategy::of_index(
      decide_block(role(phi), s0, env_->default_robot_option(s0), *env_, opts_).option);
}

}  // namespace influence
