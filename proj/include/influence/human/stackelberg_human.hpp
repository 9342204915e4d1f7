#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "influence/core/human_model.hpp"
#include "influence/env/driving.hpp"

namespace influence {

enum class Role { kFollower = 0, kLeader = 1 };

inline constexpr int kRoleWindow = 6;

struct RoleState {
  std::array<bool, kRoleWindow> merge_history{};  // oldest first; cold entries are false
  int filled = 0;
  bool crashed = false;  // crash during the last or the current interaction

  int merges() const;
};

// Leader iff no crash and strictly more than `threshold` merges in the window.
Role role_for(const RoleState& state, int threshold = 3);

struct StackelbergHumanOptions {
  std::vector<int> thresholds = {3, 2, 4};  // rule family; rule 0 is the reference human
  int block_length = 10;
  double beta = 0.1;
  RewardSpec human_reward = RewardSpec::human_score();
  RewardSpec robot_reward = RewardSpec::slow_human();
};

// States s_1..s_n produced by holding option pairs for `block_length` steps each.
std::vector<SystemState> rollout_option_blocks(const DrivingEnv& env, const SystemState& s,
                                               std::span<const int> robot_options,
                                               std::span<const int> human_options,
                                               int block_length);

struct HumanDecision {
  int option = 0;
  HumanAction action;
  Role role = Role::kFollower;
};

// Follower: best response to the robot holding `predicted_robot_option` for a
// block. Leader: best option given that the robot best-responds to it.
HumanDecision stackelberg_human_act(const RoleState& history, const SystemState& s,
                                    int predicted_robot_option, const DrivingEnv& env,
                                    const StackelbergHumanOptions& opts, int threshold = 3);

HumanDecision decide_block(Role role, const SystemState& s, int predicted_robot_option,
                           const DrivingEnv& env, const StackelbergHumanOptions& opts);

// Role-switching highway human. z is the human's block option; rules differ
// in the merge-count threshold. Memory layout below.
class StackelbergHighwayHuman final : public HumanModel {
 public:
  enum Memory { kWindow = 0, kFilled = kRoleWindow, kMerged, kCrashedNow, kCrashedLast, kRole, kSize };

  StackelbergHighwayHuman(std::shared_ptr<const DrivingEnv> env, StackelbergHumanOptions opts = {});

  std::string_view name() const override { return "stackelberg-human"; }
  std::string_view environment_name() const override { return env_->name(); }
  std::size_t state_dim() const override { return env_->state_dim(); }
  EpochStructure epochs() const override { return env_->epochs(); }
  const ActionBounds& action_bounds() const override { return env_->human_bounds(); }
  Cadence cadence() const override { return Cadence::kPerTimestep; }
  double rationality() const override { return opts_.beta; }
  int rule_count() const override { return static_cast<int>(opts_.thresholds.size()); }
  std::string rule_name(int rule_id) const override;

  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override;
  LatentStrategy short_term(const Transition& tr, const LatentStrategy& z,
                            const AdaptationRule& phi) const override;
  std::vector<RuleOutcome> long_term_outcomes(const Transition& tr,
                                              const AdaptationRule& phi) const override;
  AdaptationRule initial_rule(int rule_id) const override;
  std::vector<LatentStrategy> strategy_candidates() const override;
  std::optional<LatentStrategy> initial_strategy(const SystemState& s0,
                                                 const AdaptationRule& phi) const override;

  static RoleState role_state(const AdaptationRule& phi);
  static Role role(const AdaptationRule& phi);
  AdaptationRule advance(const Transition& tr, const AdaptationRule& phi) const;
  const StackelbergHumanOptions& options() const { return opts_; }

 private:
  std::shared_ptr<const DrivingEnv> env_;
  StackelbergHumanOptions opts_;
};

}  // namespace influence
