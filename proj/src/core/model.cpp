#include "influence/core/model.hpp"

#include <cstdio>
#include <sstream>

#include "influence/core/errors.hpp"

namespace influence {

bool is_finite(const SystemState& s) {
  for (double v : s.values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool is_finite(const ActionVector& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

AdaptationRule HumanModel::long_term(const Transition& tr, const AdaptationRule& phi,
                                     Rng& rng) const {
  auto outcomes = long_term_outcomes(tr, phi);
  if (outcomes.size() == 1) return outcomes.front().phi;
  double u = uniform01(rng);
  double acc = 0.0;
  for (const auto& o : outcomes) {
    acc += o.probability;
    if (u < acc) return o.phi;
  }
  return outcomes.back().phi;
}

void HumanModel::validate_rule(const AdaptationRule& phi) const {
  if (phi.rule_id < 0 || phi.rule_id >= rule_count()) {
    throw ConfigurationError("unknown rule_id " + std::to_string(phi.rule_id) + " for human model " +
                             std::string(name()));
  }
}

GenerativeModel::GenerativeModel(std::shared_ptr<const Environment> env,
                                 std::shared_ptr<const HumanModel> human, RewardSpec reward)
    : env_(std::move(env)), human_(std::move(human)), reward_(reward) {}

StepResult GenerativeModel::step(const AugmentedState& x, const RobotAction& a_r, Rng& rng) const {
  if (!is_finite(x.s) || !is_finite(a_r.values)) {
    throw ModelError("non-finite input to step at timestep " + std::to_string(x.s.timestep));
  }
  HumanAction a_h = human_->policy(x.s, x.z);
  SystemState s_end = env_->step_dynamics(x.s, a_r, a_h);
  double r = env_->robot_reward(s_end, reward_);

  const EpochStructure ep = env_->epochs();
  const bool boundary = ep.is_boundary(s_end.timestep);

  StepResult out;
  out.reward = r;
  out.interaction_ended = boundary;
  out.next.s = boundary ? env_->begin_interaction(s_end, rng) : s_end;

  Transition tr{x.s, a_r, a_h, s_end, out.next.s};
  if (human_->cadence() == Cadence::kPerTimestep || boundary) {
    out.next.z = human_->short_term(tr, x.z, x.phi);
    out.next.phi = human_->long_term(tr, x.phi, rng);
  } else {
    out.next.z = x.z;
    out.next.phi = x.phi;
  }

  out.obs.s = out.next.s;
  out.obs.prev_human_action = a_h;
  if (boundary) out.obs.interaction_end = s_end;
  return out;
}

GenerativeModel::MacroResult GenerativeModel::step_option(const AugmentedState& x, int option,
                                                          int steps, Rng& rng) const {
  MacroResult m;
  AugmentedState cur = x;
  const int horizon = env_->epochs().horizon();
  for (int i = 0; i < steps; ++i) {
    RobotAction a = env_->robot_option(option, cur.s);
    m.last = step(cur, a, rng);
    m.reward += m.last.reward;
    ++m.steps;
    cur = m.last.next;
    if (m.last.interaction_ended || cur.s.timestep >= horizon) break;
  }
  return m;
}

GenerativeModel compose_model(std::shared_ptr<const Environment> env,
                              std::shared_ptr<const HumanModel> human, RewardSpec reward) {
  if (!env || !human) throw ConfigurationError("compose_model: null handle");
  const std::string env_name(env->name());
  const std::string human_name(human->name());
  auto fail = [&](const std::string& what) {
    throw ConfigurationError("environment '" + env_name + "' and human model '" + human_name +
                             "' disagree on " + what);
  };
  if (env_name != human->environment_name()) fail("environment identity");
  if (env->state_dim() != human->state_dim()) fail("state dimension");
  if (env->human_bounds().size() != human->action_bounds().size()) fail("human action dimension");
  const auto a = env->epochs();
  const auto b = human->epochs();
  if (a.timesteps_per_interaction != b.timesteps_per_interaction || a.interactions != b.interactions) {
    fail("epoch structure");
  }
  if (reward.collision_penalty < 0.0 || reward.off_road_penalty < 0.0) {
    throw ConfigurationError("reward penalties must be stored nonnegative");
  }
  return GenerativeModel(std::move(env), std::move(human), reward);
}

double cumulative_reward(const Trajectory& traj, const RewardSpec& reward, const Environment& env) {
  double total = 0.0;
  for (const auto& s : traj.states) total += env.robot_reward(s, reward);
  return total;
}

double cumulative_human_score(const Trajectory& traj, const RewardSpec& theta_h,
                              const Environment& env) {
  double total = 0.0;
  for (const auto& s : traj.states) total += env.human_score(s, theta_h);
  return total;
}

bool influence_success(const InteractionLog& log, const Environment& env) {
  if (log.environment != env.name()) {
    throw ConfigurationError("interaction log for environment '" + log.environment +
                             "' evaluated against '" + std::string(env.name()) + "'");
  }
  if (log.trajectory.states.empty()) throw ConfigurationError("empty interaction log");
  return env.influence_success(log.trajectory.states.back());
}

namespace {
void append_hex(std::ostringstream& os, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  os << buf;
}
}  // namespace

std::string serialize(const SystemState& s) {
  std::ostringstream os;
  os << "t=" << s.timestep << " c=" << s.collision << " o=" << s.off_road
     << " ci=" << s.collided_this_interaction << " v=";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (i) os << ',';
    append_hex(os, s.values[i]);
  }
  return os.str();
}

std::string serialize(const AugmentedState& x) {
  std::ostringstream os;
  os << serialize(x.s) << " z=";
  append_hex(os, x.z.value);
  os << " rule=" << x.phi.rule_id << " m=";
  for (std::size_t i = 0; i < x.phi.memory.size(); ++i) {
    if (i) os << ',';
    append_hex(os, x.phi.memory[i]);
  }
  return os.str();
}

}  // namespace influence
