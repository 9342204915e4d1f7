#pragma once

#include <span>
#include <string>
#include <vector>

#include "influence/core/human_model.hpp"
#include "influence/core/types.hpp"

namespace influence {

struct Particle {
  LatentStrategy z;
  AdaptationRule phi;
  double weight = 0.0;
};

enum class BeliefMode { kEnumeration, kParticle };

class Belief {
 public:
  Belief() = default;
  // Normalizes weights; merges duplicate hypotheses in enumeration mode.
  Belief(std::vector<Particle> particles, BeliefMode mode);

  // Uniform (or weighted) over rule family x first-interaction strategies.
  static Belief enumerate_prior(const HumanModel& human, const SystemState& s0,
                                std::span<const double> rule_prior = {});
  static Belief point(const LatentStrategy& z, const AdaptationRule& phi);
  // Systematic draw of n equally weighted particles.
  static Belief sample_particles(const Belief& source, std::size_t n, Rng& rng);

  std::span<const Particle> particles() const { return particles_; }
  BeliefMode mode() const { return mode_; }
  std::size_t size() const { return particles_.size(); }
  bool empty() const { return particles_.empty(); }

  std::vector<double> rule_marginal(int rule_count) const;
  double effective_sample_size() const;
  // Index drawn proportionally to weight.
  std::size_t sample_index(Rng& rng) const;
  const Particle& mode_particle() const;

 private:
  std::vector<Particle> particles_;
  BeliefMode mode_ = BeliefMode::kEnumeration;
};

struct UpdateReport {
  bool reinvigorated = false;
  bool resampled = false;
};

// Reweights by the observed human action, propagates through g_s/g_l at the
// human's cadence, and renormalizes. When every weight vanishes the belief is
// rebuilt from 0.9 x prior rule marginal + 0.1 x uniform and a warning is logged.
Belief belief_update(const Belief& b, const SystemState& s_prev, const RobotAction& a_r,
                     const Observation& o, const HumanModel& human, Rng& rng,
                     const Belief* prior = nullptr, UpdateReport* report = nullptr);

// Entropy (nats) of the rule_id marginal.
double predict_phi_entropy(const Belief& b);

// Total variation between two beliefs over (z, phi) atoms.
double total_variation(const Belief& a, const Belief& b);

// Canonical text key of a hypothesis.
std::string hypothesis_key(const LatentStrategy& z, const AdaptationRule& phi);

}  // namespace influence
