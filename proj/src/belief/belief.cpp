#include "influence/belief/belief.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>

#include "influence/core/errors.hpp"
#include "influence/human/likelihood.hpp"

namespace influence {

std::string hypothesis_key(const LatentStrategy& z, const AdaptationRule& phi) {
  std::string key;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a|%d|", z.value, phi.rule_id);
  key += buf;
  for (double m : phi.memory) {
    std::snprintf(buf, sizeof(buf), "%a,", m);
    key += buf;
  }
  return key;
}

namespace {

std::vector<Particle> merge_duplicates(std::vector<Particle> in) {
  std::map<std::string, std::size_t> index;
  std::vector<Particle> out;
  out.reserve(in.size());
  for (auto& p : in) {
    auto [it, inserted] = index.emplace(hypothesis_key(p.z, p.phi), out.size());
    if (inserted) {
      out.push_back(std::move(p));
    } else {
      out[it->second].weight += p.weight;
    }
  }
  return out;
}

void normalize(std::vector<Particle>& ps) {
  double total = 0.0;
  for (const auto& p : ps) {
    if (!(p.weight >= 0) || !std::isfinite(p.weight)) throw ModelError("belief weight invalid");
    total += p.weight;
  }
  if (!(total > 0)) throw ModelError("belief has zero total weight");
  for (auto& p : ps) p.weight /= total;
}

std::vector<Particle> systematic_resample(const std::vector<Particle>& ps, std::size_t n, Rng& rng) {
  std::vector<Particle> out;
  out.reserve(n);
  const double step = 1.0 / static_cast<double>(n);
  double u = uniform01(rng) * step;
  double cum = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = u + k * step;
    while (i + 1 < ps.size() && cum + ps[i].weight < target) {
      cum += ps[i].weight;
      ++i;
    }
    Particle p = ps[i];
    p.weight = step;
    out.push_back(p);
  }
  return out;
}

}  // namespace

Belief::Belief(std::vector<Particle> particles, BeliefMode mode) : mode_(mode) {
  if (particles.empty()) throw ModelError("belief must contain at least one particle");
  if (mode_ == BeliefMode::kEnumeration) particles = merge_duplicates(std::move(particles));
  normalize(particles);
  particles_ = std::move(particles);
}

Belief Belief::enumerate_prior(const HumanModel& human, const SystemState& s0,
                               std::span<const double> rule_prior) {
  const int rules = human.rule_count();
  if (!rule_prior.empty() && static_cast<int>(rule_prior.size()) != rules) {
    throw ConfigurationError("rule prior size does not match the rule family");
  }
  std::vector<Particle> ps;
  for (int r = 0; r < rules; ++r) {
    const double pr = rule_prior.empty() ? 1.0 / rules : rule_prior[r];
    if (pr < 0) throw ConfigurationError("negative rule prior");
    const AdaptationRule phi = human.initial_rule(r);
    if (auto z0 = human.initial_strategy(s0, phi)) {
      ps.push_back({*z0, phi, pr});
    } else {
      const auto zs = human.strategy_candidates();
      for (const auto& z : zs) ps.push_back({z, phi, pr / zs.size()});
    }
  }
  return Belief(std::move(ps), BeliefMode::kEnumeration);
}

Belief Belief::point(const LatentStrategy& z, const AdaptationRule& phi) {
  return Belief({{z, phi, 1.0}}, BeliefMode::kEnumeration);
}

Belief Belief::sample_particles(const Belief& source, std::size_t n, Rng& rng) {
  if (n == 0) throw ConfigurationError("particle count must be positive");
  std::vector<Particle> src(source.particles_.begin(), source.particles_.end());
  return Belief(systematic_resample(src, n, rng), BeliefMode::kParticle);
}

std::vector<double> Belief::rule_marginal(int rule_count) const {
  std::vector<double> m(rule_count, 0.0);
  for (const auto& p : particles_) {
    if (p.phi.rule_id < 0 || p.phi.rule_id >= rule_count) {
      throw ConfigurationError("particle rule_id outside the family");
    }
    m[p.phi.rule_id] += p.weight;
  }
  return m;
}

double Belief::effective_sample_size() const {
  double sq = 0.0;
  for (const auto& p : particles_) sq += p.weight * p.weight;
  return sq > 0 ? 1.0 / sq : 0.0;
}

std::size_t Belief::sample_index(Rng& rng) const {
  const double u = uniform01(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    cum += particles_[i].weight;
    if (u < cum) return i;
  }
  // Rounding slack: last particle with positive weight.
  for (std::size_t i = particles_.size(); i-- > 0;) {
    if (particles_[i].weight > 0) return i;
  }
  return 0;
}

const Particle& Belief::mode_particle() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < particles_.size(); ++i) {
    if (particles_[i].weight > particles_[best].weight) best = i;
  }
  return particles_[best];
}

Belief belief_update(const Belief& b, const SystemState& s_prev, const RobotAction& a_r,
                     const Observation& o, const HumanModel& human, Rng& rng, const Belief* prior,
                     UpdateReport* report) {
  if (!o.prev_human_action) throw ModelError("belief_update: observation lacks the human action");
  const HumanAction& a_h = *o.prev_human_action;
  const auto in = b.particles();

  std::vector<double> logw(in.size());
  double max_lw = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double lw0 = in[i].weight > 0 ? std::log(in[i].weight) : -INFINITY;
    logw[i] = lw0 + log_action_likelihood(a_h, s_prev, in[i].z, human.rationality(), human);
    max_lw = std::max(max_lw, logw[i]);
  }
  const bool collapsed = !std::isfinite(max_lw);
  std::vector<double> w(in.size(), 0.0);
  if (!collapsed) {
    for (std::size_t i = 0; i < in.size(); ++i) w[i] = std::exp(logw[i] - max_lw);
  }

  const bool boundary = o.interaction_end.has_value();
  const SystemState& to = boundary ? *o.interaction_end : o.s;
  const Transition tr{s_prev, a_r, a_h, to, o.s};
  const bool propagate = human.cadence() == Cadence::kPerTimestep || boundary;

  std::vector<Particle> out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!propagate) {
      out.push_back({in[i].z, in[i].phi, w[i]});
      continue;
    }
    const LatentStrategy z_next = human.short_term(tr, in[i].z, in[i].phi);
    if (b.mode() == BeliefMode::kEnumeration) {
      for (const auto& oc : human.long_term_outcomes(tr, in[i].phi)) {
        out.push_back({z_next, oc.phi, w[i] * oc.probability});
      }
    } else {
      out.push_back({z_next, human.long_term(tr, in[i].phi, rng), w[i]});
    }
  }

  UpdateReport rep;
  if (collapsed) {
    rep.reinvigorated = true;
    const int rules = human.rule_count();
    std::vector<double> target(rules, 1.0 / rules);
    if (prior) target = prior->rule_marginal(rules);
    std::vector<int> per_rule(rules, 0);
    for (const auto& p : out) per_rule[p.phi.rule_id]++;
    for (auto& p : out) {
      p.weight = 0.9 * target[p.phi.rule_id] / per_rule[p.phi.rule_id] + 0.1 / out.size();
    }
    std::cerr << "warning: belief collapsed at timestep " << o.s.timestep
              << "; reinvigorated from prior\n";
  }

  Belief result(std::move(out), b.mode());
  if (b.mode() == BeliefMode::kParticle &&
      result.effective_sample_size() < 0.5 * static_cast<double>(result.size())) {
    rep.resampled = true;
    result = Belief::sample_particles(result, result.size(), rng);
  }
  if (report) *report = rep;
  return result;
}

double predict_phi_entropy(const Belief& b) {
  std::map<int, double> marg;
  for (const auto& p : b.particles()) marg[p.phi.rule_id] += p.weight;
  double h = 0.0;
  for (const auto& [rule, w] : marg) {
    if (w > 0) h -= w * std::log(w);
  }
  return h;
}

double total_variation(const Belief& a, const Belief& b) {
  std::map<std::string, double> diff;
  for (const auto& p : a.particles()) diff[hypothesis_key(p.z, p.phi)] += p.weight;
  for (const auto& p : b.particles()) diff[hypothesis_key(p.z, p.phi)] -= p.weight;
  double tv = 0.0;
  for (const auto& [k, d] : diff) tv += std::fabs(d);
  return 0.5 * tv;
}

}  // namespace influence
