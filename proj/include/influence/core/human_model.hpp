#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "influence/core/rng.hpp"
#include "influence/core/types.hpp"

namespace influence {

enum class Cadence { kPerTimestep, kPerInteraction };

struct RuleOutcome {
  AdaptationRule phi;
  double probability = 1.0;
};

class HumanModel {
 public:
  virtual ~HumanModel() = default;

  virtual std::string_view name() const = 0;
  virtual std::string_view environment_name() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual EpochStructure epochs() const = 0;
  virtual const ActionBounds& action_bounds() const = 0;
  virtual Cadence cadence() const = 0;
  // Noise scale of the likelihood model, as a fraction of each axis range.
  virtual double rationality() const = 0;

  virtual int rule_count() const = 0;
  virtual std::string rule_name(int rule_id) const { return std::to_string(rule_id); }

  virtual HumanAction policy(const SystemState& s, const LatentStrategy& z) const = 0;

  virtual LatentStrategy short_term(const Transition& tr, const LatentStrategy& z,
                                    const AdaptationRule& phi) const = 0;

  // All successors of phi with their probabilities; one entry when the
  // family is deterministic.
  virtual std::vector<RuleOutcome> long_term_outcomes(const Transition& tr,
                                                      const AdaptationRule& phi) const = 0;

  // Samples from long_term_outcomes. Draws from rng only when there is more
  // than one outcome.
  AdaptationRule long_term(const Transition& tr, const AdaptationRule& phi, Rng& rng) const;

  virtual AdaptationRule initial_rule(int rule_id) const = 0;
  // Finite set of z hypotheses for the first interaction.
  virtual std::vector<LatentStrategy> strategy_candidates() const = 0;
  // Families whose first z is a deterministic function of the start state
  // return it here; others leave z to the candidate set.
  virtual std::optional<LatentStrategy> initial_strategy(const SystemState& s0,
                                                         const AdaptationRule& phi) const {
    (void)s0;
    (void)phi;
    return std::nullopt;
  }

  // Latent strategy revealed by a completed interaction, if the family can
  // read it off the end state.
  virtual LatentStrategy revealed_strategy(const SystemState& interaction_end,
                                           const LatentStrategy& z) const {
    (void)interaction_end;
    return z;
  }

  void validate_rule(const AdaptationRule& phi) const;
};

}  // namespace influence
