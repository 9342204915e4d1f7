#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "influence/core/fixed_vector.hpp"

namespace influence {

inline constexpr std::size_t kMaxStateDim = 16;
inline constexpr std::size_t kMaxActionDim = 4;
inline constexpr std::size_t kMaxMemory = 12;

using StateVector = FixedVector<double, kMaxStateDim>;
using ActionVector = FixedVector<double, kMaxActionDim>;
using MemoryVector = FixedVector<double, kMaxMemory>;

struct SystemState {
  StateVector values;
  bool collision = false;
  bool off_road = false;
  // Sticky within an interaction; cleared when the next interaction begins.
  bool collided_this_interaction = false;
  int timestep = 0;

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct LatentStrategy {
  double value = 0.0;

  int index() const { return static_cast<int>(std::lround(value)); }
  static LatentStrategy of_index(int i) { return {static_cast<double>(i)}; }

  friend bool operator==(const LatentStrategy&, const LatentStrategy&) = default;
};

struct AdaptationRule {
  int rule_id = 0;
  MemoryVector memory;

  friend bool operator==(const AdaptationRule&, const AdaptationRule&) = default;
};

struct AugmentedState {
  SystemState s;
  LatentStrategy z;
  AdaptationRule phi;

  friend bool operator==(const AugmentedState&, const AugmentedState&) = default;
};

struct RobotAction {
  ActionVector values;
  // Index of the discrete option that produced this action, -1 for raw input.
  int option = -1;

  friend bool operator==(const RobotAction&, const RobotAction&) = default;
};

struct HumanAction {
  ActionVector values;

  friend bool operator==(const HumanAction&, const HumanAction&) = default;
};

struct Observation {
  SystemState s;
  std::optional<HumanAction> prev_human_action;
  // Pre-reset state when this step closed an interaction.
  std::optional<SystemState> interaction_end;
};

struct ActionBounds {
  ActionVector lower;
  ActionVector upper;

  std::size_t size() const { return lower.size(); }
  double range(std::size_t i) const { return upper[i] - lower[i]; }

  bool contains(const ActionVector& a, double tol = 1e-12) const {
    if (a.size() != lower.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] >= lower[i] - tol && a[i] <= upper[i] + tol)) return false;
    }
    return true;
  }

  ActionVector clamp(ActionVector a) const {
    for (std::size_t i = 0; i < a.size() && i < lower.size(); ++i) {
      a[i] = std::fmin(std::fmax(a[i], lower[i]), upper[i]);
    }
    return a;
  }
};

enum class RewardKind {
  kSlowHuman,      // -w * human forward speed - c * collision
  kRobotProgress,  // w * robot forward speed - c * collision
  kHumanScore,     // w * human forward speed - c * collision - o * off-road
  kNegativeDistance,
  kTabular,
};

struct RewardSpec {
  RewardKind kind = RewardKind::kSlowHuman;
  double speed_weight = 1.0;
  double collision_penalty = 10.0;
  double off_road_penalty = 0.0;

  static RewardSpec slow_human() { return {RewardKind::kSlowHuman, 1.0, 10.0, 0.0}; }
  static RewardSpec human_score() { return {RewardKind::kHumanScore, 1.0, 100.0, 10.0}; }
  static RewardSpec robot_crossing() { return {RewardKind::kRobotProgress, 1.0, 10.0, 0.0}; }
  static RewardSpec human_crossing() { return {RewardKind::kHumanScore, 1.0, 100.0, 0.0}; }
  static RewardSpec negative_distance() { return {RewardKind::kNegativeDistance, 1.0, 0.0, 0.0}; }
  static RewardSpec tabular() { return {RewardKind::kTabular, 1.0, 0.0, 0.0}; }

  friend bool operator==(const RewardSpec&, const RewardSpec&) = default;
};

struct Trajectory {
  std::vector<SystemState> states;
  std::vector<RobotAction> robot_actions;
  std::vector<HumanAction> human_actions;
};

// One step of the joint system. `to` is the post-dynamics state; `next`
// differs from it only when an interaction boundary triggered a reset.
struct Transition {
  const SystemState& from;
  const RobotAction& robot;
  const HumanAction& human;
  const SystemState& to;
  const SystemState& next;
};

struct EpochStructure {
  int timesteps_per_interaction = 1;
  int interactions = 1;

  int horizon() const { return timesteps_per_interaction * interactions; }
  bool is_boundary(int timestep) const {
    return timestep > 0 && timestep % timesteps_per_interaction == 0;
  }
  int interaction_of(int timestep) const { return timestep / timesteps_per_interaction; }
};

struct InteractionLog {
  std::string environment;
  int interaction = 0;
  // states[0] is the interaction's start; states.back() is its pre-reset end.
  Trajectory trajectory;
};

bool is_finite(const SystemState& s);
bool is_finite(const ActionVector& a);

}  // namespace influence
