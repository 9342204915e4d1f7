#include "influence/baselines/latent.hpp"

#include <cmath>
#include <limits>

#include "influence/core/errors.hpp"
#include "influence/human/likelihood.hpp"
#include "influence/planner/qmdp.hpp"

namespace influence {

namespace {

LatentStrategy predict_next(const InteractionLog& prev, const SystemState& next_start,
                            const AdaptationRule& phi, const HumanModel& human) {
  const auto& tr = prev.trajectory;
  if (tr.states.size() < 2 || tr.robot_actions.empty() || tr.human_actions.empty()) {
    throw ConfigurationError("estimate_latent: logged interaction has no steps");
  }
  const SystemState& end = tr.states.back();
  const Transition t{tr.states[tr.states.size() - 2], tr.robot_actions.back(),
                     tr.human_actions.back(), end, next_start};
  const LatentStrategy revealed = human.revealed_strategy(end, LatentStrategy{});
  return human.short_term(t, revealed, phi);
}

double interaction_log_likelihood(const Trajectory& tr, const LatentStrategy& z,
                                  const HumanModel& human) {
  double ll = 0.0;
  for (std::size_t t = 0; t < tr.human_actions.size(); ++t) {
    ll += log_action_likelihood(tr.human_actions[t], tr.states[t], z, human.rationality(), human);
  }
  return ll;
}

LatentStrategy prior_strategy(const HumanModel& human, const SystemState& s0,
                              const AdaptationRule& phi) {
  if (auto z = human.initial_strategy(s0, phi)) return *z;
  const auto zs = human.strategy_candidates();
  if (zs.empty()) throw ConfigurationError("human model declares no strategy candidates");
  return zs.front();
}

}  // namespace

LatentEstimate estimate_latent(std::span<const InteractionLog> history,
                               const InteractionLog& current, const HumanModel& human) {
  if (human.cadence() != Cadence::kPerInteraction) {
    throw ConfigurationError("estimate_latent supports per-interaction rule families only");
  }
  if (current.trajectory.states.empty()) {
    throw ConfigurationError("estimate_latent: current interaction has no start state");
  }
  const int rules = human.rule_count();
  LatentEstimate out;
  out.log_likelihood.assign(rules, 0.0);
  if (history.empty()) {
    out.phi = human.initial_rule(0);
    out.z = prior_strategy(human, current.trajectory.states.front(), out.phi);
    return out;
  }

  for (int r = 0; r < rules; ++r) {
    const AdaptationRule phi = human.initial_rule(r);
    double ll = 0.0;
    for (std::size_t i = 1; i < history.size(); ++i) {
      const LatentStrategy z =
          predict_next(history[i - 1], history[i].trajectory.states.front(), phi, human);
      ll += interaction_log_likelihood(history[i].trajectory, z, human);
    }
    const LatentStrategy z_now =
        predict_next(history.back(), current.trajectory.states.front(), phi, human);
    ll += interaction_log_likelihood(current.trajectory, z_now, human);
    out.log_likelihood[r] = ll;
  }

  int best = 0;
  for (int r = 1; r < rules; ++r) {
    if (out.log_likelihood[r] > out.log_likelihood[best]) best = r;
  }
  out.phi = human.initial_rule(best);
  out.z = predict_next(history.back(), current.trajectory.states.front(), out.phi, human);
  return out;
}

PlanResult latent_plan(const SystemState& s, const LatentStrategy& z_hat,
                       const AdaptationRule& phi_hat, const GenerativeModel& model,
                       const LatentPlanConfig& cfg, Rng& rng) {
  const GenerativeModel frozen = freeze_long_term(model);
  if (!cfg.exhaustive) return pomcpow_plan(s, Belief::point(z_hat, phi_hat), frozen, cfg.search, rng);

  const auto q = exhaustive_q_evaluator(frozen, cfg.search.steps_per_decision,
                                        cfg.search.lookahead_interactions)({s, z_hat, phi_hat});
  PlanResult out;
  out.root_q = q;
  out.root_visits.assign(q.size(), 0);
  for (int k = 1; k < static_cast<int>(q.size()); ++k) {
    if (q[k] > q[out.option]) out.option = k;
  }
  out.action = model.env().robot_option(out.option, s);
  return out;
}

}  // namespace influence
