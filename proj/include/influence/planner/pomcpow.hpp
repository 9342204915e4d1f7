#pragma once

#include <cstddef>
#include <vector>

#include "influence/belief/belief.hpp"
#include "influence/core/model.hpp"

namespace influence {

enum class RolloutPolicy { kRandom, kDefaultOption };

struct PlannerConfig {
  int budget = 1000;  // simulations per decision
  // UCB constant applied to values normalized by the observed return range.
  double exploration = 1.0;
  double k_action = 10.0;
  double alpha_action = 0.5;
  double k_obs = 5.0;
  double alpha_obs = 0.25;
  double discount = 1.0;
  int steps_per_decision = 1;
  // Interactions covered by the search, counting the current one.
  int lookahead_interactions = 3;
  // Decisions simulated past the tree's leaf; negative means up to the horizon.
  int rollout_depth = -1;
  double state_kernel = 0.5;  // m, Gaussian kernel on observed states
  RolloutPolicy rollout = RolloutPolicy::kRandom;
  double time_budget_ms = 0.0;  // anytime cutoff; 0 disables

  void validate() const;
};

struct SearchStats {
  int simulations = 0;
  std::size_t belief_nodes = 0;
  std::size_t action_nodes = 0;
  std::size_t particles = 0;
  int max_depth = 0;
  int widening_violations = 0;
  double elapsed_ms = 0.0;
  bool deadline_hit = false;
};

struct PlanResult {
  RobotAction action;
  int option = 0;
  std::vector<int> root_visits;    // per option; 0 when never expanded
  std::vector<double> root_q;      // per option; -inf when never expanded
  SearchStats stats;
};

// Timestep at which the search stops: the end of the lookahead window,
// capped at the episode end.
int search_horizon_end(const EpochStructure& ep, int timestep, int lookahead_interactions);

// UCB tree search with double progressive widening over the augmented state.
// Root states are drawn from b with s fixed to the observed state.
PlanResult pomcpow_plan(const SystemState& s, const Belief& b, const GenerativeModel& model,
                        const PlannerConfig& cfg, Rng& rng);

}  // namespace influence
