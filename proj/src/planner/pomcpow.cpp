#include "influence/planner/pomcpow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "influence/core/errors.hpp"
#include "influence/human/likelihood.hpp"

namespace influence {

void PlannerConfig::validate() const {
  if (budget < 1) throw ConfigurationError("planner budget must be >= 1");
  if (!(k_action > 0) || !(k_obs > 0)) throw ConfigurationError("widening k must be > 0");
  if (alpha_action < 0 || alpha_action > 1 || alpha_obs < 0 || alpha_obs > 1) {
    throw ConfigurationError("widening alpha must lie in [0, 1]");
  }
  if (!(discount > 0) || discount > 1) throw ConfigurationError("discount must lie in (0, 1]");
  if (exploration < 0) throw ConfigurationError("exploration constant must be nonnegative");
  if (steps_per_decision < 1) throw ConfigurationError("steps_per_decision must be >= 1");
  if (lookahead_interactions < 1) throw ConfigurationError("lookahead must cover >= 1 interaction");
  if (!(state_kernel > 0)) throw ConfigurationError("state kernel must be > 0");
  if (time_budget_ms < 0) throw ConfigurationError("time budget must be nonnegative");
}

int search_horizon_end(const EpochStructure& ep, int timestep, int lookahead_interactions) {
  const int window_end = (ep.interaction_of(timestep) + lookahead_interactions) *
                         ep.timesteps_per_interaction;
  return std::min(ep.horizon(), window_end);
}

namespace {

struct BagEntry {
  AugmentedState x;
  double weight;
  double reward;
};

struct BeliefNode {
  int visits = 0;
  std::vector<int> actions;   // action-node indices, in expansion order
  std::vector<int> untried;   // options not yet expanded, next at the back
  std::vector<BagEntry> bag;
  double bag_weight = 0.0;
  SystemState obs_s;
  HumanAction obs_a;
  bool has_obs = false;
};

struct ActionNode {
  int option = 0;
  int visits = 0;
  double q = 0.0;
  std::vector<int> children;  // belief-node indices
  std::vector<int> child_counts;
  int count_total = 0;
};

bool same_observation(const BeliefNode& n, const Observation& o) {
  if (n.obs_s.timestep != o.s.timestep || n.obs_s.values.size() != o.s.values.size()) return false;
  for (std::size_t i = 0; i < o.s.values.size(); ++i) {
    if (std::fabs(n.obs_s.values[i] - o.s.values[i]) > 1e-9) return false;
  }
  const auto& a = o.prev_human_action->values;
  if (n.obs_a.values.size() != a.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(n.obs_a.values[i] - a[i]) > 1e-9) return false;
  }
  return true;
}

class Search {
 public:
  Search(const GenerativeModel& model, const PlannerConfig& cfg, Rng& rng, int horizon_end)
      : model_(model), cfg_(cfg), rng_(rng), horizon_end_(horizon_end),
        options_(model.env().robot_option_count()) {}

  int new_belief_node() {
    BeliefNode n;
    n.untried.resize(options_);
    std::iota(n.untried.begin(), n.untried.end(), 0);
    std::shuffle(n.untried.begin(), n.untried.end(), rng_);
    std::reverse(n.untried.begin(), n.untried.end());
    beliefs_.push_back(std::move(n));
    return static_cast<int>(beliefs_.size()) - 1;
  }

  double simulate(const AugmentedState& x, int h, int depth) {
    if (x.s.timestep >= horizon_end_) return 0.0;
    max_depth_ = std::max(max_depth_, depth);
    const int ha = select_action(h);
    const int option = actions_[ha].option;

    GenerativeModel::MacroResult m;
    try {
      m = model_.step_option(x, option, steps_for(x), rng_);
    } catch (const std::exception& e) {
      throw PlannerError("search step failed at timestep " + std::to_string(x.s.timestep) +
                         ", option " + std::to_string(option) + ", depth " +
                         std::to_string(depth) + ": " + e.what());
    }
    const Observation& o = m.last.obs;

    int hao = -1;
    bool fresh = false;
    ActionNode& an = actions_[ha];
    const double obs_limit = cfg_.k_obs * std::pow(std::max(an.visits, 1), cfg_.alpha_obs);
    if (static_cast<double>(an.children.size()) <= obs_limit) {
      for (std::size_t i = 0; i < an.children.size(); ++i) {
        if (same_observation(beliefs_[an.children[i]], o)) {
          hao = an.children[i];
          an.child_counts[i]++;
          break;
        }
      }
      if (hao < 0) {
        fresh = true;
        const int idx = new_belief_node();
        ActionNode& an2 = actions_[ha];
        beliefs_[idx].obs_s = o.s;
        beliefs_[idx].obs_a = *o.prev_human_action;
        beliefs_[idx].has_obs = true;
        an2.children.push_back(idx);
        an2.child_counts.push_back(1);
        hao = idx;
      }
      actions_[ha].count_total++;
    } else {
      hao = pick_child(an);
    }

    BeliefNode& bn = beliefs_[hao];
    const double w = fresh ? 1.0 : observation_weight(bn, o);
    bn.bag.push_back({m.last.next, w, m.reward});
    bn.bag_weight += w;
    ++particles_;

    double total;
    if (fresh) {
      total = m.reward + discount(m.steps) * rollout(m.last.next);
    } else {
      const BagEntry& e = pick_particle(beliefs_[hao]);
      const AugmentedState next = e.x;
      const double r = e.reward;
      total = r + discount(m.steps) * simulate(next, hao, depth + 1);
    }

    beliefs_[h].visits++;
    ActionNode& a = actions_[ha];
    a.visits++;
    a.q += (total - a.q) / a.visits;
    return total;
  }

  void note_return(double v) {
    lo_ = std::min(lo_, v);
    hi_ = std::max(hi_, v);
  }

  SearchStats audit() const {
    SearchStats s;
    s.belief_nodes = beliefs_.size();
    s.action_nodes = actions_.size();
    s.particles = particles_;
    s.max_depth = max_depth_;
    for (const auto& b : beliefs_) {
      const double limit = cfg_.k_action * std::pow(std::max(b.visits, 1), cfg_.alpha_action) + 1.0;
      if (static_cast<double>(b.actions.size()) > limit) s.widening_violations++;
    }
    for (const auto& a : actions_) {
      const double limit = cfg_.k_obs * std::pow(std::max(a.visits, 1), cfg_.alpha_obs) + 1.0;
      if (static_cast<double>(a.children.size()) > limit) s.widening_violations++;
    }
    return s;
  }

  const BeliefNode& node(int i) const { return beliefs_[i]; }
  const ActionNode& action(int i) const { return actions_[i]; }
  BeliefNode& node_mut(int i) { return beliefs_[i]; }

 private:
  int steps_for(const AugmentedState& x) const {
    return std::min(cfg_.steps_per_decision, horizon_end_ - x.s.timestep);
  }

  double discount(int steps) const {
    return cfg_.discount == 1.0 ? 1.0 : std::pow(cfg_.discount, steps);
  }

  int select_action(int h) {
    BeliefNode& b = beliefs_[h];
    const double limit = cfg_.k_action * std::pow(std::max(b.visits, 1), cfg_.alpha_action);
    if (!b.untried.empty() && static_cast<double>(b.actions.size()) <= limit) {
      ActionNode a;
      a.option = b.untried.back();
      b.untried.pop_back();
      actions_.push_back(std::move(a));
      beliefs_[h].actions.push_back(static_cast<int>(actions_.size()) - 1);
    }
    const BeliefNode& bn = beliefs_[h];
    const double range = hi_ > lo_ ? hi_ - lo_ : 1.0;
    const double log_n = std::log(std::max(bn.visits, 1));
    int best = bn.actions.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (int idx : bn.actions) {
      const ActionNode& a = actions_[idx];
      double score;
      if (a.visits == 0) {
        score = std::numeric_limits<double>::infinity();
      } else {
        score = a.q / range + cfg_.exploration * std::sqrt(log_n / a.visits);
      }
      if (score > best_score) {
        best_score = score;
        best = idx;
      }
    }
    return best;
  }

  int pick_child(const ActionNode& a) {
    int u = std::uniform_int_distribution<int>(0, a.count_total - 1)(rng_);
    for (std::size_t i = 0; i < a.children.size(); ++i) {
      u -= a.child_counts[i];
      if (u < 0) return a.children[i];
    }
    return a.children.back();
  }

  const BagEntry& pick_particle(const BeliefNode& b) {
    if (!(b.bag_weight > 0)) {
      return b.bag[std::uniform_int_distribution<std::size_t>(0, b.bag.size() - 1)(rng_)];
    }
    double u = uniform01(rng_) * b.bag_weight;
    for (const auto& e : b.bag) {
      u -= e.weight;
      if (u < 0) return e;
    }
    for (auto it = b.bag.rbegin(); it != b.bag.rend(); ++it) {
      if (it->weight > 0) return *it;
    }
    return b.bag.back();
  }

  double observation_weight(const BeliefNode& b, const Observation& o) const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < o.s.values.size(); ++i) {
      const double d = o.s.values[i] - b.obs_s.values[i];
      d2 += d * d;
    }
    if (o.s.timestep != b.obs_s.timestep) return 0.0;
    const double lk = -0.5 * d2 / (cfg_.state_kernel * cfg_.state_kernel);
    const double la = log_action_density(b.obs_a, *o.prev_human_action,
                                         model_.human().rationality(), model_.human().action_bounds());
    return std::exp(lk + la);
  }

  double rollout(const AugmentedState& start) {
    AugmentedState x = start;
    double total = 0.0;
    double scale = 1.0;
    int decisions = 0;
    while (x.s.timestep < horizon_end_) {
      if (cfg_.rollout_depth >= 0 && decisions >= cfg_.rollout_depth) break;
      const int option = cfg_.rollout == RolloutPolicy::kRandom
                             ? std::uniform_int_distribution<int>(0, options_ - 1)(rng_)
                             : model_.env().default_robot_option(x.s);
      const auto m = model_.step_option(x, option, steps_for(x), rng_);
      total += scale * m.reward;
      scale *= discount(m.steps);
      x = m.last.next;
      ++decisions;
    }
    return total;
  }

  const GenerativeModel& model_;
  const PlannerConfig& cfg_;
  Rng& rng_;
  int horizon_end_;
  int options_;
  std::vector<BeliefNode> beliefs_;
  std::vector<ActionNode> actions_;
  std::size_t particles_ = 0;
  int max_depth_ = 0;
  double lo_ = std::numeric_limits<double>::infinity();
  double hi_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

PlanResult pomcpow_plan(const SystemState& s, const Belief& b, const GenerativeModel& model,
                        const PlannerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (b.empty()) throw PlannerError("pomcpow_plan: empty belief");
  const int options = model.env().robot_option_count();
  if (options < 1) throw PlannerError("pomcpow_plan: model has no robot options");
  const auto start = std::chrono::steady_clock::now();
  const EpochStructure ep = model.epochs();
  const int horizon_end = search_horizon_end(ep, s.timestep, cfg.lookahead_interactions);

  Search search(model, cfg, rng, horizon_end);
  const int root = search.new_belief_node();
  PlanResult out;
  int sims = 0;
  bool deadline = false;
  if (s.timestep < horizon_end) {
    for (; sims < cfg.budget; ++sims) {
      if (cfg.time_budget_ms > 0 && sims > 0) {
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (ms >= cfg.time_budget_ms) {
          deadline = true;
          break;
        }
      }
      const Particle& p = b.particles()[b.sample_index(rng)];
      const AugmentedState x{s, p.z, p.phi};
      search.note_return(search.simulate(x, root, 0));
    }
  }

  out.root_visits.assign(options, 0);
  out.root_q.assign(options, -std::numeric_limits<double>::infinity());
  int best_option = -1;
  for (int idx : search.node(root).actions) {
    const auto& a = search.action(idx);
    out.root_visits[a.option] = a.visits;
    out.root_q[a.option] = a.q;
  }
  for (int k = 0; k < options; ++k) {
    if (out.root_visits[k] == 0) continue;
    if (best_option < 0 || out.root_visits[k] > out.root_visits[best_option]) best_option = k;
  }
  if (best_option < 0) best_option = model.env().default_robot_option(s);
  out.option = best_option;
  out.action = model.env().robot_option(best_option, s);
  out.stats = search.audit();
  out.stats.simulations = sims;
  out.stats.deadline_hit = deadline;
  out.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace influence
