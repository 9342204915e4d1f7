#pragma once

#include <memory>
#include <string>
#include <vector>

#include "influence/baselines/latent.hpp"
#include "influence/baselines/one_step.hpp"
#include "influence/belief/belief.hpp"
#include "influence/harness/config.hpp"

namespace influence {

// Closed-loop robot policy driven one timestep at a time.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string_view name() const = 0;
  virtual void reset(const SystemState& s0, Rng& rng) = 0;
  virtual RobotAction act(const SystemState& s, Rng& rng) = 0;
  // Called after every step with the state the action was taken in.
  virtual void observe(const SystemState& s_prev, const RobotAction& a_r, const Observation& o,
                       Rng& rng) = 0;
  // Anytime cutoff for planners that support one; 0 disables.
  virtual void set_time_budget_ms(double) {}
  virtual const Belief* belief() const { return nullptr; }
  // Search statistics of the most recent plan, when a tree search ran.
  virtual const SearchStats* last_search() const { return nullptr; }
};

std::unique_ptr<Controller> make_controller(const AlgorithmSpec& spec, const World& world,
                                            const ScenarioConfig& cfg);

// Shared by option-level controllers: holds the current option for
// steps_per_decision timesteps and re-plans at interaction starts.
class OptionController : public Controller {
 public:
  OptionController(const World& world, int steps_per_decision)
      : world_(world), steps_per_decision_(steps_per_decision) {}
  void reset(const SystemState& s0, Rng& rng) override;
  RobotAction act(const SystemState& s, Rng& rng) override;
  void observe(const SystemState& s_prev, const RobotAction& a_r, const Observation& o,
               Rng& rng) override;
  int current_option() const { return option_; }

 protected:
  virtual int decide(const SystemState& s, Rng& rng) = 0;
  virtual void on_reset(const SystemState&, Rng&) {}
  virtual void on_observe(const SystemState&, const RobotAction&, const Observation&, Rng&) {}

  World world_;
  int steps_per_decision_;

 private:
  int option_ = 0;
  int steps_left_ = 0;
};

class UnifiedController final : public OptionController {
 public:
  UnifiedController(const World& world, PlannerConfig cfg, int particles,
                    std::vector<double> rule_prior);
  std::string_view name() const override { return "unified"; }
  void set_time_budget_ms(double ms) override { cfg_.time_budget_ms = ms; }
  const Belief* belief() const override { return &belief_; }
  const SearchStats* last_search() const override { return &stats_; }

 protected:
  int decide(const SystemState& s, Rng& rng) override;
  void on_reset(const SystemState& s0, Rng& rng) override;
  void on_observe(const SystemState& s_prev, const RobotAction& a_r, const Observation& o,
                  Rng& rng) override;

 private:
  PlannerConfig cfg_;
  int particles_;
  std::vector<double> rule_prior_;
  Belief prior_;
  Belief belief_;
  SearchStats stats_;
};

class LatentController final : public OptionController {
 public:
  LatentController(const World& world, PlannerConfig cfg, bool exhaustive);
  std::string_view name() const override { return "latent"; }
  void set_time_budget_ms(double ms) override { cfg_.search.time_budget_ms = ms; }
  const std::vector<InteractionLog>& history() const { return history_; }

 protected:
  int decide(const SystemState& s, Rng& rng) override;
  void on_reset(const SystemState& s0, Rng& rng) override;
  void on_observe(const SystemState& s_prev, const RobotAction& a_r, const Observation& o,
                  Rng& rng) override;

 private:
  LatentPlanConfig cfg_;
  std::vector<InteractionLog> history_;
  InteractionLog current_;
};

// Receding-horizon bilevel planner over the option grid, re-solved every block.
class StackelbergController : public OptionController {
 public:
  StackelbergController(const World& world, ActionGrid grid, RewardSpec human_reward);
  std::string_view name() const override { return "stackelberg"; }

 protected:
  int decide(const SystemState& s, Rng& rng) override;

  ActionGrid grid_;
  DrivingSequenceSimulator sim_;
  StateReward r_r_;
  StateReward r_h_;
};

class NoiseController final : public Controller {
 public:
  NoiseController(std::unique_ptr<Controller> base, std::vector<double> sigma, ActionBounds bounds);
  std::string_view name() const override { return "noise"; }
  void reset(const SystemState& s0, Rng& rng) override { base_->reset(s0, rng); }
  RobotAction act(const SystemState& s, Rng& rng) override;
  void observe(const SystemState& s_prev, const RobotAction& a_r, const Observation& o,
               Rng& rng) override {
    base_->observe(s_prev, a_r, o, rng);
  }

 private:
  std::unique_ptr<Controller> base_;
  std::vector<double> sigma_;
  ActionBounds bounds_;
};

class OneStepController final : public StackelbergController {
 public:
  OneStepController(const World& world, ActionGrid grid, RewardSpec human_reward, double lambda,
                    double inverse_beta);
  std::string_view name() const override { return "one-step"; }
  const OneStepState& state() const { return state_; }
  // Entropy of the tracked human posterior after each decision.
  const std::vector<double>& entropy_trace() const { return entropy_trace_; }

 protected:
  int decide(const SystemState& s, Rng& rng) override;
  void on_reset(const SystemState& s0, Rng& rng) override;

 private:
  OneStepState state_;
  std::vector<double> entropy_trace_;
};

}  // namespace influence
