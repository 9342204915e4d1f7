#include "influence/human/likelihood.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "influence/core/errors.hpp"

namespace influence {

double log_action_density(const HumanAction& observed, const HumanAction& predicted, double beta,
                          const ActionBounds& bounds) {
  if (beta < 0) throw ConfigurationError("rationality beta must be nonnegative");
  if (observed.values.size() != predicted.values.size()) {
    throw ModelError("human action dimension mismatch in likelihood");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (beta == 0.0) {
    for (std::size_t i = 0; i < observed.values.size(); ++i) {
      if (std::fabs(observed.values[i] - predicted.values[i]) > kIndicatorTolerance) return kNegInf;
    }
    return 0.0;
  }
  double lp = 0.0;
  for (std::size_t i = 0; i < observed.values.size(); ++i) {
    const double sigma = beta * bounds.range(i);
    const double d = (observed.values[i] - predicted.values[i]) / sigma;
    lp += -0.5 * d * d - std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  return lp;
}

double log_action_likelihood(const HumanAction& a_h, const SystemState& s, const LatentStrategy& z,
                             double beta, const HumanModel& human) {
  return log_action_density(a_h, human.policy(s, z), beta, human.action_bounds());
}

double action_likelihood(const HumanAction& a_h, const SystemState& s, const LatentStrategy& z,
                         double beta, const HumanModel& human) {
  return std::exp(log_action_likelihood(a_h, s, z, beta, human));
}

}  // namespace influence
