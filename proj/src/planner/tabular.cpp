#include "influence/planner/tabular.hpp"

#include <algorithm>
#include <cmath>

#include "influence/core/errors.hpp"

namespace influence {

TabularMomdp TabularMomdp::make(int states, int hidden, int robot_actions, int human_actions,
                                int horizon) {
  TabularMomdp m;
  m.states = states;
  m.hidden = hidden;
  m.robot_actions = robot_actions;
  m.human_actions = human_actions;
  m.horizon = horizon;
  const std::size_t t = std::max(horizon, 0);
  m.next_state.assign(t * states * robot_actions * human_actions, 0);
  m.human_policy.assign(t * states * hidden, 0);
  m.reward.assign(t * states, 0.0);
  m.prior.assign(hidden, 1.0 / hidden);
  return m;
}

std::size_t TabularMomdp::joint_size() const {
  return static_cast<std::size_t>(std::max(horizon, 0)) * states * robot_actions * hidden *
         human_actions;
}

void TabularMomdp::validate() const {
  if (states < 1 || hidden < 1 || robot_actions < 1 || human_actions < 1 || horizon < 0) {
    throw ConfigurationError("tabular model: sizes must be positive");
  }
  const std::size_t t = horizon;
  if (next_state.size() != t * states * robot_actions * human_actions ||
      human_policy.size() != t * states * hidden || reward.size() != t * states ||
      prior.size() != static_cast<std::size_t>(hidden)) {
    throw ConfigurationError("tabular model: table sizes inconsistent");
  }
  for (int s : next_state) {
    if (s < 0 || s >= states) throw ConfigurationError("tabular model: next state out of range");
  }
  for (int b : human_policy) {
    if (b < 0 || b >= human_actions) throw ConfigurationError("tabular model: human action out of range");
  }
  if (initial_state < 0 || initial_state >= states) {
    throw ConfigurationError("tabular model: initial state out of range");
  }
}

TabularEnvironment::TabularEnvironment(std::shared_ptr<const TabularMomdp> m) : m_(std::move(m)) {
  m_->validate();
  robot_bounds_.lower = {0.0};
  robot_bounds_.upper = {static_cast<double>(m_->robot_actions - 1)};
  human_bounds_.lower = {0.0};
  human_bounds_.upper = {static_cast<double>(std::max(1, m_->human_actions - 1))};
}

SystemState TabularEnvironment::state(int s, int t) {
  SystemState out;
  out.values = {static_cast<double>(s)};
  out.timestep = t;
  return out;
}

SystemState TabularEnvironment::reset(Rng&) const { return state(m_->initial_state, 0); }

SystemState TabularEnvironment::begin_interaction(const SystemState& end, Rng&) const { return end; }

SystemState TabularEnvironment::step_dynamics(const SystemState& s, const RobotAction& a_r,
                                              const HumanAction& a_h) const {
  const int t = s.timestep;
  if (t < 0 || t >= m_->horizon) throw ModelError("tabular step beyond horizon");
  const int si = static_cast<int>(std::lround(s.values[0]));
  const int a = static_cast<int>(std::lround(a_r.values[0]));
  const int b = static_cast<int>(std::lround(a_h.values[0]));
  if (a < 0 || a >= m_->robot_actions || b < 0 || b >= m_->human_actions) {
    throw ModelError("tabular step: action out of range");
  }
  return state(m_->next(t, si, a, b), t + 1);
}

double TabularEnvironment::robot_reward(const SystemState& s, const RewardSpec&) const {
  if (s.timestep < 1 || s.timestep > m_->horizon) return 0.0;
  return m_->r(s.timestep - 1, static_cast<int>(std::lround(s.values[0])));
}

RobotAction TabularEnvironment::robot_option(int option, const SystemState&) const {
  if (option < 0 || option >= m_->robot_actions) throw ConfigurationError("tabular option out of range");
  return {{static_cast<double>(option)}, option};
}

TabularHuman::TabularHuman(std::shared_ptr<const TabularMomdp> m) : m_(std::move(m)) {
  bounds_.lower = {0.0};
  bounds_.upper = {static_cast<double>(std::max(1, m_->human_actions - 1))};
}

HumanAction TabularHuman::policy(const SystemState& s, const LatentStrategy& z) const {
  const int t = std::min(s.timestep, m_->horizon - 1);
  if (t < 0) return {{0.0}};
  return {{static_cast<double>(m_->human(t, static_cast<int>(std::lround(s.values[0])), z.index()))}};
}

AdaptationRule TabularHuman::initial_rule(int rule_id) const {
  AdaptationRule phi;
  phi.rule_id = rule_id;
  validate_rule(phi);
  return phi;
}

std::vector<LatentStrategy> TabularHuman::strategy_candidates() const {
  std::vector<LatentStrategy> out;
  for (int h = 0; h < m_->hidden; ++h) out.push_back(LatentStrategy::of_index(h));
  return out;
}

GenerativeModel tabular_model(std::shared_ptr<const TabularMomdp> m) {
  return compose_model(std::make_shared<TabularEnvironment>(m), std::make_shared<TabularHuman>(m),
                       RewardSpec::tabular());
}

Belief tabular_belief(const TabularMomdp& m, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != m.hidden) {
    throw ConfigurationError("tabular belief: weight count must equal the hidden count");
  }
  std::vector<Particle> ps;
  for (int h = 0; h < m.hidden; ++h) {
    ps.push_back({LatentStrategy::of_index(h), AdaptationRule{}, weights[h]});
  }
  return Belief(std::move(ps), BeliefMode::kEnumeration);
}

TabularMomdp information_gathering_toy() {
  enum { kStart = 0, kProbed = 1, kWaited = 2 };
  enum { kWait = 0, kProbe = 1 };
  TabularMomdp m = TabularMomdp::make(3, 2, 2, 2, 3);
  for (int b = 0; b < 2; ++b) {
    for (int s = 0; s < 3; ++s) {
      m.next(0, s, kWait, b) = kWaited;
      m.next(0, s, kProbe, b) = kProbed;
      for (int a = 0; a < 2; ++a) {
        m.next(1, s, a, b) = kStart;
        // Final step: the robot's action is its answer; the human plays h.
        m.next(2, s, a, b) = a == b ? kProbed : kWaited;
      }
    }
  }
  for (int h = 0; h < 2; ++h) m.human(1, kProbed, h) = h;
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 3; ++s) m.human(2, s, h) = h;
  }
  m.r(0, kProbed) = -2.0;
  m.r(0, kWaited) = -1.0;
  m.r(2, kProbed) = 10.0;
  m.r(2, kWaited) = -10.0;
  m.prior = {0.5, 0.5};
  return m;
}

}  // namespace influence
