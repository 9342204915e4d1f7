#pragma once

#include <string>
#include <vector>

#include "influence/core/environment.hpp"
#include "influence/env/geometry.hpp"

namespace influence {

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
};

enum class DrivingScenario {
  kHighwayBlock,  // robot ahead, tries to slow the human (role-switching experiments, live sessions)
  kHighwayPass,   // robot behind, passes a human who merges into a lane
  kIntersection,  // perpendicular single-lane roads
};

struct DrivingParams {
  DrivingScenario scenario = DrivingScenario::kHighwayBlock;
  int timesteps = 120;
  int interactions = 100;
  double dt = 0.1;
  double lane_width = 4.0;
  int lanes = 2;
  double vehicle_length = 4.0;
  double vehicle_width = 2.0;
  double v_max = 10.0;
  double max_steer = 1.5;  // rad/s
  double max_accel = 4.0;  // m/s^2, symmetric
  std::vector<double> lateral_targets;  // robot option lane-center targets (m)
  std::vector<double> accel_levels = {-3.0, 0.0, 3.0};
  // Highway-pass start geometry.
  double pass_human_gap = 8.0;
  double pass_human_speed = 4.0;
  double pass_robot_speed = 10.0;
  // Highway-block start geometry.
  double block_gap_min = 6.0;
  double block_gap_max = 14.0;
  double block_speed_min = 6.0;
  double block_speed_max = 8.0;
  // Intersection start geometry.
  double approach_min = 14.0;
  double approach_max = 18.0;

  static DrivingParams highway_block();
  static DrivingParams highway_pass();
  static DrivingParams intersection();
};

// Lane-following controller shared by robot options and human policies.
struct LaneFollowGains {
  double lateral = 0.4;       // rad per m of lateral error
  double max_offset = 0.6;    // rad
  double heading = 4.0;       // 1/s
};

class DrivingEnv final : public Environment {
 public:
  // Layout: robot (x, y, heading, speed), human (x, y, heading, speed), then
  // for the intersection the in-interaction ticks at which each car first
  // entered the conflict box (-1 if not yet).
  enum Index { kRX = 0, kRY, kRH, kRV, kHX, kHY, kHH, kHV, kRobotEnter, kHumanEnter };

  explicit DrivingEnv(DrivingParams params);

  std::string_view name() const override;
  EpochStructure epochs() const override { return {p_.timesteps, p_.interactions}; }
  double dt() const override { return p_.dt; }
  std::size_t state_dim() const override;
  const ActionBounds& robot_bounds() const override { return bounds_; }
  const ActionBounds& human_bounds() const override { return bounds_; }

  SystemState reset(Rng& rng) const override;
  SystemState begin_interaction(const SystemState& end, Rng& rng) const override;
  SystemState step_dynamics(const SystemState& s, const RobotAction& a_r,
                            const HumanAction& a_h) const override;
  bool detect_collision(const SystemState& s) const override;
  double robot_reward(const SystemState& s, const RewardSpec& theta) const override;
  double human_score(const SystemState& s, const RewardSpec& theta) const override;
  bool influence_success(const SystemState& interaction_end) const override;
  double lane_progress(const SystemState& start, const SystemState& end) const override;

  int robot_option_count() const override;
  RobotAction robot_option(int option, const SystemState& s) const override;
  std::string robot_option_name(int option) const override;
  int default_robot_option(const SystemState& s) const override;

  const DrivingParams& params() const { return p_; }
  DrivingScenario scenario() const { return p_.scenario; }

  static VehicleState robot(const SystemState& s);
  static VehicleState human(const SystemState& s);
  static void set_robot(SystemState& s, const VehicleState& v);
  static void set_human(SystemState& s, const VehicleState& v);

  double lane_center(int lane) const;
  int nearest_lane(double x) const;
  double road_axis_robot() const;  // travel direction of the robot (rad)
  double road_axis_human() const;

  // Steering/accel that tracks a lateral target while applying `accel`.
  ActionVector follow(const VehicleState& v, double axis, double target_offset, double accel,
                      const LaneFollowGains& gains = {}) const;
  // Accel that drives speed toward `target_speed`, within bounds.
  double speed_control(const VehicleState& v, double target_speed) const;

  geometry::OrientedBox footprint(const VehicleState& v) const;
  bool human_off_road(const SystemState& s) const;
  // Robot is ahead of the human and laterally overlaps the human's lane.
  bool robot_blocks_human_lane(const SystemState& s) const;
  // Human actions for a lane-target / accel option pair (human options mirror robot options).
  HumanAction human_option(int option, const SystemState& s) const;

 private:
  VehicleState integrate(const VehicleState& v, double steer, double accel) const;
  bool in_conflict_box(const VehicleState& v, bool along_x) const;
  double clamp_accel(const VehicleState& v, double accel) const;

  DrivingParams p_;
  ActionBounds bounds_;
};

}  // namespace influence
