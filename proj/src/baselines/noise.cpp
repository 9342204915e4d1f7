#include "influence/baselines/noise.hpp"

#include <cmath>
#include <random>

#include "influence/core/errors.hpp"

namespace influence {

std::vector<double> default_noise_sigma(const ActionBounds& bounds) {
  std::vector<double> out(bounds.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.1 * bounds.range(i);
  return out;
}

RobotAction noise_wrap(const RobotAction& a, std::span<const double> sigma,
                       const ActionBounds& bounds, Rng& rng) {
  if (sigma.size() != a.values.size() || bounds.size() != a.values.size()) {
    throw ConfigurationError("noise sigma must have one entry per action axis");
  }
  RobotAction out = a;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] >= 0.0) || !std::isfinite(sigma[i])) {
      throw ConfigurationError("noise sigma must be finite and non-negative");
    }
    if (sigma[i] > 0.0) out.values[i] += std::normal_distribution<double>(0.0, sigma[i])(rng);
  }
  out.values = bounds.clamp(out.values);
  return out;
}

std::vector<RobotAction> noise_wrap(std::span<const RobotAction> plan,
                                    std::span<const double> sigma, const ActionBounds& bounds,
                                    Rng& rng) {
  std::vector<RobotAction> out;
  out.reserve(plan.size());
  for (const auto& a : plan) out.push_back(noise_wrap(a, sigma, bounds, rng));
  return out;
}

}  // namespace influence
