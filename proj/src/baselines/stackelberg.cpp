#include "influence/baselines/stackelberg.hpp"

#include "influence/core/errors.hpp"
#include "influence/human/stackelberg_human.hpp"

namespace influence {

namespace {

std::size_t power(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

std::vector<int> digits(std::size_t index, int base, int count) {
  std::vector<int> out(count, 0);
  for (int i = count - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % base);
    index /= base;
  }
  return out;
}

}  // namespace

std::size_t ActionGrid::robot_sequences() const { return power(robot_options, blocks); }
std::size_t ActionGrid::human_sequences() const { return power(human_options, blocks); }

std::vector<int> ActionGrid::robot_sequence(std::size_t index) const {
  return digits(index, robot_options, blocks);
}

std::vector<int> ActionGrid::human_sequence(std::size_t index) const {
  return digits(index, human_options, blocks);
}

void ActionGrid::validate() const {
  if (robot_options < 1 || human_options < 1 || blocks < 1 || block_length < 1) {
    throw ConfigurationError("action grid must be non-empty");
  }
}

std::vector<SystemState> DrivingSequenceSimulator::simulate(const SystemState& s0,
                                                            std::span<const int> robot,
                                                            std::span<const int> human) const {
  return rollout_option_blocks(*env_, s0, robot, human, block_length_);
}

double trajectory_value(const SystemState& s0, const std::vector<SystemState>& states,
                        const StateReward& r) {
  double total = r(s0);
  for (const auto& s : states) total += r(s);
  return total;
}

BestResponse human_best_response(const SystemState& s0, const ActionGrid& grid,
                                 const SequenceSimulator& sim, std::span<const int> robot,
                                 const StateReward& r_h) {
  BestResponse best;
  bool first = true;
  for (std::size_t j = 0; j < grid.human_sequences(); ++j) {
    const auto human = grid.human_sequence(j);
    auto states = sim.simulate(s0, robot, human);
    const double v = trajectory_value(s0, states, r_h);
    if (first || v > best.human_value) {
      first = false;
      best.human_index = j;
      best.human_value = v;
      best.states = std::move(states);
    }
  }
  return best;
}

StackelbergSolution stackelberg_plan(const SystemState& s0, const ActionGrid& grid,
                                     const SequenceSimulator& sim, const StateReward& r_r,
                                     const StateReward& r_h) {
  grid.validate();
  StackelbergSolution best;
  bool first = true;
  for (std::size_t i = 0; i < grid.robot_sequences(); ++i) {
    const auto robot = grid.robot_sequence(i);
    const BestResponse br = human_best_response(s0, grid, sim, robot, r_h);
    const double v = trajectory_value(s0, br.states, r_r);
    if (first || v > best.robot_value) {
      first = false;
      best.robot_index = i;
      best.robot = robot;
      best.human = grid.human_sequence(br.human_index);
      best.robot_value = v;
      best.human_value = br.human_value;
    }
  }
  return best;
}

}  // namespace influence
