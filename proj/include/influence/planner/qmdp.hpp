#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "influence/belief/belief.hpp"
#include "influence/core/model.hpp"
#include "influence/planner/pomcpow.hpp"
#include "influence/planner/tabular.hpp"

namespace influence {

// Fully observed action values Q(x, a) for every robot option at x.
using QEvaluator = std::function<std::vector<double>(const AugmentedState& x)>;

// Exact Q from the tabular tables with the hidden index known.
QEvaluator exact_q_evaluator(std::shared_ptr<const TabularMomdp> m);

// Exhaustive depth-first search over option sequences on a deterministic
// model, up to `horizon_end` (a timestep).
QEvaluator exhaustive_q_evaluator(const GenerativeModel& model, int steps_per_decision,
                                  int lookahead_interactions);

// Root Q estimates of a point-belief tree search (all root options expanded).
QEvaluator search_q_evaluator(const GenerativeModel& model, PlannerConfig cfg, std::uint64_t seed);

struct QmdpResult {
  int option = 0;
  RobotAction action;
  std::vector<double> q;  // belief-weighted
};

// argmax_a sum_h b(h) Q_h(a), lowest option on ties. Requires enumeration mode.
QmdpResult qmdp_plan(const SystemState& s, const Belief& b, const GenerativeModel& model,
                     const QEvaluator& q);

// Human wrapper whose long-term dynamics are the identity.
class FrozenRuleHuman final : public HumanModel {
 public:
  explicit FrozenRuleHuman(std::shared_ptr<const HumanModel> inner) : inner_(std::move(inner)) {}

  std::string_view name() const override { return inner_->name(); }
  std::string_view environment_name() const override { return inner_->environment_name(); }
  std::size_t state_dim() const override { return inner_->state_dim(); }
  EpochStructure epochs() const override { return inner_->epochs(); }
  const ActionBounds& action_bounds() const override { return inner_->action_bounds(); }
  Cadence cadence() const override { return inner_->cadence(); }
  double rationality() const override { return inner_->rationality(); }
  int rule_count() const override { return inner_->rule_count(); }
  std::string rule_name(int r) const override { return inner_->rule_name(r); }
  HumanAction policy(const SystemState& s, const LatentStrategy& z) const override {
    return inner_->policy(s, z);
  }
  LatentStrategy short_term(const Transition& tr, const LatentStrategy& z,
                            const AdaptationRule& phi) const override {
    return inner_->short_term(tr, z, phi);
  }
  std::vector<RuleOutcome> long_term_outcomes(const Transition&,
                                              const AdaptationRule& phi) const override {
    return {{phi, 1.0}};
  }
  AdaptationRule initial_rule(int r) const override { return inner_->initial_rule(r); }
  std::vector<LatentStrategy> strategy_candidates() const override {
    return inner_->strategy_candidates();
  }
  std::optional<LatentStrategy> initial_strategy(const SystemState& s0,
                                                 const AdaptationRule& phi) const override {
    return inner_->initial_strategy(s0, phi);
  }
  LatentStrategy revealed_strategy(const SystemState& end, const LatentStrategy& z) const override {
    return inner_->revealed_strategy(end, z);
  }

 private:
  std::shared_ptr<const HumanModel> inner_;
};

GenerativeModel freeze_long_term(const GenerativeModel& model);

}  // namespace influence
