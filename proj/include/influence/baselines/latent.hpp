#pragma once

#include <span>
#include <vector>

#include "influence/core/model.hpp"
#include "influence/planner/pomcpow.hpp"

namespace influence {

struct LatentEstimate {
  LatentStrategy z;
  AdaptationRule phi;
  std::vector<double> log_likelihood;  // per rule
};

// Maximum-likelihood rule given every logged human action, with z for each
// interaction predicted from the previous interaction's end. `current` holds
// the ongoing interaction (at least its start state). Ties go to the lowest
// rule index; an empty history yields the prior mode.
LatentEstimate estimate_latent(std::span<const InteractionLog> history,
                               const InteractionLog& current, const HumanModel& human);

struct LatentPlanConfig {
  PlannerConfig search;
  // Exhaustive option-sequence search instead of tree search (small models only).
  bool exhaustive = false;
};

// Plans in the fully observed augmented model with phi frozen at phi_hat.
PlanResult latent_plan(const SystemState& s, const LatentStrategy& z_hat,
                       const AdaptationRule& phi_hat, const GenerativeModel& model,
                       const LatentPlanConfig& cfg, Rng& rng);

}  // namespace influence
