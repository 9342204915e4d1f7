#pragma once

#include <vector>

#include "influence/baselines/stackelberg.hpp"

namespace influence {

// The human's belief over a finite set of robot reward hypotheses.
struct OneStepState {
  std::vector<StateReward> hypotheses;
  std::vector<double> belief;  // normalized, one entry per hypothesis
  double lambda = 0.0;         // entropy weight
  double beta = 1.0;           // inverse-planning rationality of the robot, as the human models it

  void validate() const;
};

// Shannon entropy in nats; zero entries contribute nothing.
double entropy(const std::vector<double>& p);

// Posterior over hypotheses after the human sees robot sequence `observed`:
// b_k * exp(beta * R_k(observed)) / sum_j exp(beta * R_k(j)), renormalized.
// values[k][j] is the return of robot sequence j under hypothesis k.
std::vector<double> inverse_planning_posterior(const std::vector<double>& belief,
                                               const std::vector<std::vector<double>>& values,
                                               double beta, std::size_t observed);

struct OneStepSolution {
  std::size_t robot_index = 0;
  std::vector<int> robot;
  std::vector<int> human;
  double robot_value = 0.0;
  double entropy = 0.0;       // of the posterior after the chosen sequence
  double objective = 0.0;     // lambda * entropy + robot_value
  std::vector<double> posterior;
};

// Maximizes lambda * H(posterior after the plan) + R_R over the robot
// sequences of the grid, each evaluated against the human's best response.
// Ties go to the lowest index, so lambda = 0 reproduces stackelberg_plan.
OneStepSolution one_step_plan(const SystemState& s0, const OneStepState& state,
                              const ActionGrid& grid, const SequenceSimulator& sim,
                              const StateReward& r_r, const StateReward& r_h);

// The aggressive / defensive pair: robot progress with collision weight 1 and 10.
std::vector<StateReward> crossing_hypotheses(const class Environment& env);

}  // namespace influence
