#include "influence/harness/controllers.hpp"

#include "influence/baselines/latent.hpp"
#include "influence/baselines/noise.hpp"
#include "influence/core/errors.hpp"
#include "influence/env/driving.hpp"

namespace influence {

void OptionController::reset(const SystemState& s0, Rng& rng) {
  option_ = world_.env->default_robot_option(s0);
  steps_left_ = 0;
  on_reset(s0, rng);
}

RobotAction OptionController::act(const SystemState& s, Rng& rng) {
  if (steps_left_ <= 0) {
    option_ = decide(s, rng);
    steps_left_ = steps_per_decision_;
  }
  return world_.env->robot_option(option_, s);
}

void OptionController::observe(const SystemState& s_prev, const RobotAction& a_r,
                               const Observation& o, Rng& rng) {
  --steps_left_;
  if (o.interaction_end) steps_left_ = 0;
  on_observe(s_prev, a_r, o, rng);
}

UnifiedController::UnifiedController(const World& world, PlannerConfig cfg, int particles,
                                     std::vector<double> rule_prior)
    : OptionController(world, cfg.steps_per_decision),
      cfg_(cfg),
      particles_(particles),
      rule_prior_(std::move(rule_prior)) {
  cfg_.validate();
}

void UnifiedController::on_reset(const SystemState& s0, Rng& rng) {
  prior_ = Belief::enumerate_prior(*world_.human, s0, rule_prior_);
  belief_ = particles_ > 0 ? Belief::sample_particles(prior_, particles_, rng) : prior_;
  stats_ = {};
}

int UnifiedController::decide(const SystemState& s, Rng& rng) {
  const PlanResult r = pomcpow_plan(s, belief_, world_.model, cfg_, rng);
  stats_ = r.stats;
  return r.option;
}

void UnifiedController::on_observe(const SystemState& s_prev, const RobotAction& a_r,
                                   const Observation& o, Rng& rng) {
  belief_ = belief_update(belief_, s_prev, a_r, o, *world_.human, rng, &prior_);
}

LatentController::LatentController(const World& world, PlannerConfig cfg, bool exhaustive)
    : OptionController(world, cfg.steps_per_decision) {
  cfg.validate();
  cfg_.search = cfg;
  cfg_.exhaustive = exhaustive;
  if (world.human->cadence() != Cadence::kPerInteraction) {
    throw ConfigurationError("latent baseline needs a per-interaction human model");
  }
}

void LatentController::on_reset(const SystemState& s0, Rng&) {
  history_.clear();
  current_ = InteractionLog{std::string(world_.env->name()), 0, {}};
  current_.trajectory.states.push_back(s0);
}

int LatentController::decide(const SystemState& s, Rng& rng) {
  const LatentEstimate est = estimate_latent(history_, current_, *world_.human);
  return latent_plan(s, est.z, est.phi, world_.model, cfg_, rng).option;
}

void LatentController::on_observe(const SystemState&, const RobotAction& a_r, const Observation& o,
                                  Rng&) {
  if (!o.prev_human_action) throw ModelError("latent baseline needs observed human actions");
  auto& tr = current_.trajectory;
  tr.robot_actions.push_back(a_r);
  tr.human_actions.push_back(*o.prev_human_action);
  if (o.interaction_end) {
    tr.states.push_back(*o.interaction_end);
    const int next = current_.interaction + 1;
    history_.push_back(std::move(current_));
    current_ = InteractionLog{std::string(world_.env->name()), next, {}};
    current_.trajectory.states.push_back(o.s);
  } else {
    tr.states.push_back(o.s);
  }
}

namespace {

std::shared_ptr<const DrivingEnv> driving_env(const World& world) {
  auto d = std::dynamic_pointer_cast<const DrivingEnv>(world.env);
  if (!d) throw ConfigurationError("grid planners need a driving environment");
  return d;
}

}  // namespace

StackelbergController::StackelbergController(const World& world, ActionGrid grid,
                                             RewardSpec human_reward)
    : OptionController(world, grid.block_length),
      grid_(grid),
      sim_(driving_env(world), grid.block_length) {
  grid_.validate();
  const int options = world.env->robot_option_count();
  if (grid_.robot_options != options || grid_.human_options != options) {
    throw ConfigurationError("action grid must use the environment's " + std::to_string(options) +
                             " options per agent");
  }
  auto env = world.env;
  const RewardSpec robot_reward = world.model.reward();
  r_r_ = [env, robot_reward](const SystemState& s) { return env->robot_reward(s, robot_reward); };
  r_h_ = [env, human_reward](const SystemState& s) { return env->human_score(s, human_reward); };
}

int StackelbergController::decide(const SystemState& s, Rng&) {
  return stackelberg_plan(s, grid_, sim_, r_r_, r_h_).robot.front();
}

NoiseController::NoiseController(std::unique_ptr<Controller> base, std::vector<double> sigma,
                                 ActionBounds bounds)
    : base_(std::move(base)), sigma_(std::move(sigma)), bounds_(std::move(bounds)) {}

RobotAction NoiseController::act(const SystemState& s, Rng& rng) {
  return noise_wrap(base_->act(s, rng), sigma_, bounds_, rng);
}

OneStepController::OneStepController(const World& world, ActionGrid grid, RewardSpec human_reward,
                                     double lambda, double inverse_beta)
    : StackelbergController(world, grid, human_reward) {
  state_.hypotheses = crossing_hypotheses(*world.env);
  state_.lambda = lambda;
  state_.beta = inverse_beta;
}

void OneStepController::on_reset(const SystemState&, Rng&) {
  state_.belief.assign(state_.hypotheses.size(), 1.0 / static_cast<double>(state_.hypotheses.size()));
  entropy_trace_.clear();
}

int OneStepController::decide(const SystemState& s, Rng&) {
  const OneStepSolution sol = one_step_plan(s, state_, grid_, sim_, r_r_, r_h_);
  // The human watches the executed plan and updates their estimate.
  state_.belief = sol.posterior;
  entropy_trace_.push_back(sol.entropy);
  return sol.robot.front();
}

std::unique_ptr<Controller> make_controller(const AlgorithmSpec& spec, const World& world,
                                            const ScenarioConfig& cfg) {
  const RewardSpec human_reward = default_human_reward(cfg.environment);
  if (spec.id == "unified") {
    return std::make_unique<UnifiedController>(world, spec.planner, spec.particles, cfg.rule_prior);
  }
  if (spec.id == "latent") {
    return std::make_unique<LatentController>(world, spec.planner, spec.exhaustive);
  }
  if (spec.id == "stackelberg") {
    return std::make_unique<StackelbergController>(world, spec.grid, human_reward);
  }
  if (spec.id == "noise") {
    const auto& bounds = world.env->robot_bounds();
    std::vector<double> sigma(bounds.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = spec.noise_fraction * bounds.range(i);
    return std::make_unique<NoiseController>(
        std::make_unique<StackelbergController>(world, spec.grid, human_reward), sigma, bounds);
  }
  if (spec.id == "one-step") {
    return std::make_unique<OneStepController>(world, spec.grid, human_reward, spec.lambda,
                                               spec.inverse_beta);
  }
  throw ConfigurationError("unknown algorithm id '" + spec.id + "'");
}

}  // namespace influence
