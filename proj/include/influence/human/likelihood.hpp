#pragma once

#include "influence/core/human_model.hpp"

namespace influence {

inline constexpr double kIndicatorTolerance = 1e-9;

// Noisy-rational density of a_h around policy(s, z): independent Gaussians
// with sigma_i = beta * range_i. beta == 0 gives an indicator on a 1e-9 ball.
double action_likelihood(const HumanAction& a_h, const SystemState& s, const LatentStrategy& z,
                         double beta, const HumanModel& human);

double log_action_likelihood(const HumanAction& a_h, const SystemState& s,
                             const LatentStrategy& z, double beta, const HumanModel& human);

// Same density between two explicit actions.
double log_action_density(const HumanAction& observed, const HumanAction& predicted, double beta,
                          const ActionBounds& bounds);

}  // namespace influence
