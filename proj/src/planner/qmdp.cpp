#include "influence/planner/qmdp.hpp"

#include <cmath>
#include <limits>

#include "influence/core/errors.hpp"
#include "influence/planner/exact.hpp"

namespace influence {

QEvaluator exact_q_evaluator(std::shared_ptr<const TabularMomdp> m) {
  return [m](const AugmentedState& x) {
    std::vector<double> b(m->hidden, 0.0);
    b.at(x.z.index()) = 1.0;
    return exact_decide(*m, x.s.timestep, static_cast<int>(std::lround(x.s.values[0])), b).q;
  };
}

namespace {

double best_value(const GenerativeModel& model, const AugmentedState& x, int steps, int horizon_end,
                  std::uint64_t seed);

std::vector<double> option_values(const GenerativeModel& model, const AugmentedState& x, int steps,
                                  int horizon_end, std::uint64_t seed) {
  const int n = model.env().robot_option_count();
  std::vector<double> q(n, 0.0);
  for (int k = 0; k < n; ++k) {
    Rng rng(seed);
    const int len = std::min(steps, horizon_end - x.s.timestep);
    const auto m = model.step_option(x, k, len, rng);
    q[k] = m.reward + best_value(model, m.last.next, steps, horizon_end, seed);
  }
  return q;
}

double best_value(const GenerativeModel& model, const AugmentedState& x, int steps, int horizon_end,
                  std::uint64_t seed) {
  if (x.s.timestep >= horizon_end) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double v : option_values(model, x, steps, horizon_end, seed)) best = std::max(best, v);
  return best;
}

}  // namespace

QEvaluator exhaustive_q_evaluator(const GenerativeModel& model, int steps_per_decision,
                                  int lookahead_interactions) {
  if (steps_per_decision < 1) throw ConfigurationError("steps_per_decision must be >= 1");
  return [model, steps_per_decision, lookahead_interactions](const AugmentedState& x) {
    const int end = search_horizon_end(model.epochs(), x.s.timestep, lookahead_interactions);
    if (x.s.timestep >= end) return std::vector<double>(model.env().robot_option_count(), 0.0);
    return option_values(model, x, steps_per_decision, end, 0x5eedULL);
  };
}

QEvaluator search_q_evaluator(const GenerativeModel& model, PlannerConfig cfg, std::uint64_t seed) {
  // Expand every root option immediately.
  cfg.k_action = std::max<double>(cfg.k_action, model.env().robot_option_count());
  cfg.alpha_action = std::max(cfg.alpha_action, 0.0);
  return [model, cfg, seed](const AugmentedState& x) {
    Rng rng(seed);
    const auto r = pomcpow_plan(x.s, Belief::point(x.z, x.phi), model, cfg, rng);
    return r.root_q;
  };
}

QmdpResult qmdp_plan(const SystemState& s, const Belief& b, const GenerativeModel& model,
                     const QEvaluator& q) {
  if (b.mode() != BeliefMode::kEnumeration) {
    throw ConfigurationError("qmdp_plan requires an enumerable (enumeration-mode) belief");
  }
  const int n = model.env().robot_option_count();
  QmdpResult out;
  out.q.assign(n, 0.0);
  for (const auto& p : b.particles()) {
    if (p.weight <= 0) continue;
    const auto qh = q({s, p.z, p.phi});
    if (static_cast<int>(qh.size()) != n) throw PlannerError("Q evaluator returned wrong arity");
    for (int k = 0; k < n; ++k) out.q[k] += p.weight * qh[k];
  }
  for (int k = 1; k < n; ++k) {
    if (out.q[k] > out.q[out.option]) out.option = k;
  }
  out.action = model.env().robot_option(out.option, s);
  return out;
}

GenerativeModel freeze_long_term(const GenerativeModel& model) {
  return GenerativeModel(model.env_ptr(), std::make_shared<FrozenRuleHuman>(model.human_ptr()),
                         model.reward());
}

}  // namespace influence
