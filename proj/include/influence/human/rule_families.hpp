#pragma once

#include <memory>
#include <string>

#include "influence/core/human_model.hpp"
#include "influence/env/circle.hpp"
#include "influence/env/driving.hpp"
#include "influence/env/reaching.hpp"

namespace influence {

struct SwitchingOptions {
  int loss_threshold = 3;
  // Probability that a fired trigger actually switches the rule.
  double switch_probability = 1.0;
  double beta = 0.1;
};

// Three-rule family with per-interaction updates. The human "loses" an
// interaction when the robot's influence succeeds; after `loss_threshold`
// consecutive losses the rule advances to (rule_id + 1) mod 3.
// Memory: [consecutive losses].
class SwitchingRuleHuman : public HumanModel {
 public:
  static constexpr int kRules = 3;

  Cadence cadence() const override { return Cadence::kPerInteraction; }
  double rationality() const override { return opts_.beta; }
  int rule_count() const override { return kRules; }
  std::string_view environment_name() const override { return env_->name(); }
  std::size_t state_dim() const override { return env_->state_dim(); }
  EpochStructure epochs() const override { return env_->epochs(); }
  const ActionBounds& action_bounds() const override { return env_->human_bounds(); }

  LatentStrategy short_term(const Transition& tr, const LatentStrategy& z,
                            const AdaptationRule& phi) const override;
  std::vector<RuleOutcome> long_term_outcomes(const Transition& tr,
                                              const AdaptationRule& phi) const override;
  AdaptationRule initial_rule(int rule_id) const override;

  const SwitchingOptions& options() const { return opts_; }

  // z' under `rule` from a finished interaction's end state.
  virtual LatentStrategy apply_rule(int rule, const SystemState& end, const LatentStrategy& z) const = 0;

 protected:
  SwitchingRuleHuman(std::shared_ptr<const Environment> env, SwitchingOptions opts);

  std::shared_ptr<const Environment> env_;
  SwitchingOptions opts_;
};

// Evader choosing a hiding angle on the rim.
// Rules: 0 antipode of the pursuer's end angle, 1 pursuer angle + pi/2,
// 2 stay where the evader ended.
class CircleHuman final : public SwitchingRuleHuman {
 public:
  CircleHuman(std::shared_ptr<const CircleEnv> env, SwitchingOptions opts = {});

  std::string_view name() const override { return "circle-rules"; }
  std::string rule_name(int rule_id) const override;
  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override;
  std::vector<LatentStrategy> strategy_candidates() const override;
  LatentStrategy revealed_strategy(const SystemState& end, const LatentStrategy& z) const override;
  LatentStrategy apply_rule(int rule, const SystemState& end, const LatentStrategy& z) const override;

 private:
  std::shared_ptr<const CircleEnv> circle_;
};

// Human who merges from the road center into lane z while being passed.
// Rules: 0 into the robot's previous lane, 1 away from it, 2 keep own lane.
class DrivingHuman final : public SwitchingRuleHuman {
 public:
  DrivingHuman(std::shared_ptr<const DrivingEnv> env, SwitchingOptions opts = {});

  std::string_view name() const override { return "driving-rules"; }
  std::string rule_name(int rule_id) const override;
  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override;
  std::vector<LatentStrategy> strategy_candidates() const override;
  LatentStrategy revealed_strategy(const SystemState& end, const LatentStrategy& z) const override;
  LatentStrategy apply_rule(int rule, const SystemState& end, const LatentStrategy& z) const override;

 private:
  std::shared_ptr<const DrivingEnv> driving_;
};

// Human reaching for goal z.
// Rules: 0 shift left (index - 1, wrapping 0 -> 2), 1 shift right, 2 repeat.
class ReachingHuman final : public SwitchingRuleHuman {
 public:
  ReachingHuman(std::shared_ptr<const ReachingEnv> env, SwitchingOptions opts = {});

  std::string_view name() const override { return "robot-rules"; }
  std::string rule_name(int rule_id) const override;
  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override;
  std::vector<LatentStrategy> strategy_candidates() const override;
  LatentStrategy revealed_strategy(const SystemState& end, const LatentStrategy& z) const override;
  LatentStrategy apply_rule(int rule, const SystemState& end, const LatentStrategy& z) const override;

 private:
  std::shared_ptr<const ReachingEnv> reaching_;
};

// Intersection crossing human. z: 0 go, 1 yield to the robot.
// Rules: 0 yield after the robot went first, 1 always go, 2 alternate.
class IntersectionHuman final : public SwitchingRuleHuman {
 public:
  IntersectionHuman(std::shared_ptr<const DrivingEnv> env, SwitchingOptions opts = {});

  std::string_view name() const override { return "intersection-rules"; }
  std::string rule_name(int rule_id) const override;
  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override;
  std::vector<LatentStrategy> strategy_candidates() const override;
  LatentStrategy revealed_strategy(const SystemState& end, const LatentStrategy& z) const override;
  LatentStrategy apply_rule(int rule, const SystemState& end, const LatentStrategy& z) const override;

 private:
  std::shared_ptr<const DrivingEnv> driving_;
};

}  // namespace influence
