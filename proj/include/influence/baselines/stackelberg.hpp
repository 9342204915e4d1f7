#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "influence/core/types.hpp"
#include "influence/env/driving.hpp"

namespace influence {

// Discrete robot/human option sequences: one option per block, each block
// held for block_length timesteps. Sequences are indexed lexicographically
// (first block most significant).
struct ActionGrid {
  int robot_options = 1;
  int human_options = 1;
  int blocks = 1;
  int block_length = 1;

  std::size_t robot_sequences() const;
  std::size_t human_sequences() const;
  std::size_t size() const { return robot_sequences() * human_sequences(); }
  std::vector<int> robot_sequence(std::size_t index) const;
  std::vector<int> human_sequence(std::size_t index) const;
  void validate() const;
};

class SequenceSimulator {
 public:
  virtual ~SequenceSimulator() = default;
  // States after s0 produced by the two option sequences.
  virtual std::vector<SystemState> simulate(const SystemState& s0, std::span<const int> robot,
                                            std::span<const int> human) const = 0;
};

class DrivingSequenceSimulator final : public SequenceSimulator {
 public:
  DrivingSequenceSimulator(std::shared_ptr<const DrivingEnv> env, int block_length)
      : env_(std::move(env)), block_length_(block_length) {}
  std::vector<SystemState> simulate(const SystemState& s0, std::span<const int> robot,
                                    std::span<const int> human) const override;

 private:
  std::shared_ptr<const DrivingEnv> env_;
  int block_length_;
};

using StateReward = std::function<double(const SystemState&)>;

// Sum of r over s0 and every simulated state.
double trajectory_value(const SystemState& s0, const std::vector<SystemState>& states,
                        const StateReward& r);

struct BestResponse {
  std::size_t human_index = 0;
  std::vector<SystemState> states;
  double human_value = 0.0;
};

// Human sequence maximizing R_H against a fixed robot sequence; lowest index on ties.
BestResponse human_best_response(const SystemState& s0, const ActionGrid& grid,
                                 const SequenceSimulator& sim, std::span<const int> robot,
                                 const StateReward& r_h);

struct StackelbergSolution {
  std::size_t robot_index = 0;
  std::vector<int> robot;
  std::vector<int> human;
  double robot_value = 0.0;
  double human_value = 0.0;
};

// Bilevel brute force: best response for each robot sequence, then the robot
// sequence with the highest R_R; lowest index on ties.
StackelbergSolution stackelberg_plan(const SystemState& s0, const ActionGrid& grid,
                                     const SequenceSimulator& sim, const StateReward& r_r,
                                     const StateReward& r_h);

}  // namespace influence
