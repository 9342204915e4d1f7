#include "influence/baselines/one_step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "influence/core/environment.hpp"
#include "influence/core/errors.hpp"

namespace influence {

void OneStepState::validate() const {
  if (hypotheses.empty()) throw ConfigurationError("one-step planner needs at least one reward hypothesis");
  if (belief.size() != hypotheses.size()) {
    throw ConfigurationError("one-step belief size does not match the hypothesis set");
  }
  double total = 0.0;
  for (double p : belief) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigurationError("one-step belief has an invalid entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigurationError("one-step belief is not normalized");
  if (!(lambda >= 0.0)) throw ConfigurationError("entropy weight must be non-negative");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigurationError("beta must be finite and non-negative");
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

std::vector<double> inverse_planning_posterior(const std::vector<double>& belief,
                                               const std::vector<std::vector<double>>& values,
                                               double beta, std::size_t observed) {
  std::vector<double> log_post(belief.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < belief.size(); ++k) {
    if (belief[k] <= 0.0) continue;
    const auto& v = values[k];
    const double vmax = *std::max_element(v.begin(), v.end());
    double z = 0.0;
    for (double x : v) z += std::exp(beta * (x - vmax));
    log_post[k] = std::log(belief[k]) + beta * (v[observed] - vmax) - std::log(z);
  }
  const double m = *std::max_element(log_post.begin(), log_post.end());
  std::vector<double> post(belief.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < post.size(); ++k) {
    post[k] = std::exp(log_post[k] - m);
    total += post[k];
  }
  for (double& p : post) p /= total;
  return post;
}

OneStepSolution one_step_plan(const SystemState& s0, const OneStepState& state,
                              const ActionGrid& grid, const SequenceSimulator& sim,
                              const StateReward& r_r, const StateReward& r_h) {
  state.validate();
  grid.validate();
  const std::size_t n = grid.robot_sequences();
  const std::size_t kh = state.hypotheses.size();

  std::vector<BestResponse> responses;
  responses.reserve(n);
  std::vector<double> robot_value(n);
  std::vector<std::vector<double>> values(kh, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto robot = grid.robot_sequence(i);
    responses.push_back(human_best_response(s0, grid, sim, robot, r_h));
    robot_value[i] = trajectory_value(s0, responses.back().states, r_r);
    for (std::size_t k = 0; k < kh; ++k) {
      values[k][i] = trajectory_value(s0, responses.back().states, state.hypotheses[k]);
    }
  }

  OneStepSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double h = 0.0;
    std::vector<double> post;
    if (state.lambda > 0.0 || i == 0) {
      post = inverse_planning_posterior(state.belief, values, state.beta, i);
      h = entropy(post);
    }
    const double obj = state.lambda * h + robot_value[i];
    if (obj > best.objective) {
      best.robot_index = i;
      best.robot_value = robot_value[i];
      best.entropy = h;
      best.objective = obj;
      best.posterior = std::move(post);
    }
  }
  if (best.posterior.empty()) {
    best.posterior = inverse_planning_posterior(state.belief, values, state.beta, best.robot_index);
    best.entropy = entropy(best.posterior);
  }
  best.robot = grid.robot_sequence(best.robot_index);
  best.human = grid.human_sequence(responses[best.robot_index].human_index);
  return best;
}

std::vector<StateReward> crossing_hypotheses(const Environment& env) {
  std::vector<StateReward> out;
  for (double c : {1.0, 10.0}) {
    RewardSpec spec = RewardSpec::robot_crossing();
    spec.collision_penalty = c;
    out.push_back([&env, spec](const SystemState& s) { return env.robot_reward(s, spec); });
  }
  return out;
}

}  // namespace influence
