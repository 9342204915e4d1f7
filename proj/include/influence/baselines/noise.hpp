#pragma once

#include <span>
#include <vector>

#include "influence/core/rng.hpp"
#include "influence/core/types.hpp"

namespace influence {

// 10% of each axis range.
std::vector<double> default_noise_sigma(const ActionBounds& bounds);

// Independent zero-mean Gaussian perturbation per timestep and axis, then
// clamped to bounds. sigma must have one non-negative entry per axis.
std::vector<RobotAction> noise_wrap(std::span<const RobotAction> plan,
                                    std::span<const double> sigma, const ActionBounds& bounds,
                                    Rng& rng);

RobotAction noise_wrap(const RobotAction& a, std::span<const double> sigma,
                       const ActionBounds& bounds, Rng& rng);

}  // namespace influence
