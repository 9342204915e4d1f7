#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "influence/belief/belief.hpp"
#include "influence/core/environment.hpp"
#include "influence/core/human_model.hpp"
#include "influence/core/model.hpp"

namespace influence {

// Finite-horizon MOMDP with deterministic, time-indexed tables and a static
// hidden index h. The hidden index plays the role of z; there is one rule.
struct TabularMomdp {
  int states = 1;
  int hidden = 1;
  int robot_actions = 1;
  int human_actions = 1;
  int horizon = 0;
  int initial_state = 0;
  std::vector<int> next_state;    // [t][s][a_r][a_h]
  std::vector<int> human_policy;  // [t][s][h]
  std::vector<double> reward;     // [t][s']: reward for arriving in s' at step t+1
  std::vector<double> prior;      // over h

  static TabularMomdp make(int states, int hidden, int robot_actions, int human_actions, int horizon);

  int& next(int t, int s, int a, int b) { return next_state[index4(t, s, a, b)]; }
  int next(int t, int s, int a, int b) const { return next_state[index4(t, s, a, b)]; }
  int& human(int t, int s, int h) { return human_policy[(t * states + s) * hidden + h]; }
  int human(int t, int s, int h) const { return human_policy[(t * states + s) * hidden + h]; }
  double& r(int t, int s_next) { return reward[t * states + s_next]; }
  double r(int t, int s_next) const { return reward[t * states + s_next]; }

  // Entries of the joint (time, state, robot action, hidden, human action) table.
  std::size_t joint_size() const;
  void validate() const;

 private:
  std::size_t index4(int t, int s, int a, int b) const {
    return ((static_cast<std::size_t>(t) * states + s) * robot_actions + a) * human_actions + b;
  }
};

// GenerativeModel adapters so the same instance runs through every planner.
class TabularEnvironment final : public Environment {
 public:
  explicit TabularEnvironment(std::shared_ptr<const TabularMomdp> m);

  std::string_view name() const override { return "tabular"; }
  EpochStructure epochs() const override { return {std::max(1, m_->horizon), 1}; }
  double dt() const override { return 1.0; }
  std::size_t state_dim() const override { return 1; }
  const ActionBounds& robot_bounds() const override { return robot_bounds_; }
  const ActionBounds& human_bounds() const override { return human_bounds_; }
  SystemState reset(Rng& rng) const override;
  SystemState begin_interaction(const SystemState& end, Rng& rng) const override;
  SystemState step_dynamics(const SystemState& s, const RobotAction& a_r,
                            const HumanAction& a_h) const override;
  bool detect_collision(const SystemState&) const override { return false; }
  double robot_reward(const SystemState& s, const RewardSpec& theta) const override;
  double human_score(const SystemState&, const RewardSpec&) const override { return 0.0; }
  bool influence_success(const SystemState&) const override { return false; }
  int robot_option_count() const override { return m_->robot_actions; }
  RobotAction robot_option(int option, const SystemState& s) const override;

  const TabularMomdp& table() const { return *m_; }
  static SystemState state(int s, int t);

 private:
  std::shared_ptr<const TabularMomdp> m_;
  ActionBounds robot_bounds_;
  ActionBounds human_bounds_;
};

class TabularHuman final : public HumanModel {
 public:
  explicit TabularHuman(std::shared_ptr<const TabularMomdp> m);

  std::string_view name() const override { return "tabular-human"; }
  std::string_view environment_name() const override { return "tabular"; }
  std::size_t state_dim() const override { return 1; }
  EpochStructure epochs() const override { return {std::max(1, m_->horizon), 1}; }
  const ActionBounds& action_bounds() const override { return bounds_; }
  Cadence cadence() const override { return Cadence::kPerInteraction; }
  double rationality() const override { return 0.0; }
  int rule_count() const override { return 1; }
  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override;
  LatentStrategy short_term(const Transition&, const LatentStrategy& z,
                            const AdaptationRule&) const override {
    return z;
  }
  std::vector<RuleOutcome> long_term_outcomes(const Transition&,
                                              const AdaptationRule& phi) const override {
    return {{phi, 1.0}};
  }
  AdaptationRule initial_rule(int rule_id) const override;
  std::vector<LatentStrategy> strategy_candidates() const override;

 private:
  std::shared_ptr<const TabularMomdp> m_;
  ActionBounds bounds_;
};

GenerativeModel tabular_model(std::shared_ptr<const TabularMomdp> m);
Belief tabular_belief(const TabularMomdp& m, std::span<const double> weights);

// Two hypotheses, three states, two actions, horizon 3. Probing (action 1)
// costs 2 and makes the human reveal h; waiting (action 0) costs 1. At the
// last step the robot answers, earning +10 if it matches h and -10 otherwise.
TabularMomdp information_gathering_toy();

}  // namespace influence
