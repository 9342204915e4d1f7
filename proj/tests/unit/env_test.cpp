#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "influence/core/errors.hpp"
#include "influence/env/circle.hpp"
#include "influence/env/driving.hpp"
#include "influence/env/geometry.hpp"
#include "influence/env/reaching.hpp"

using namespace influence;
using geometry::OrientedBox;
using geometry::Vec2;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

SystemState driving_state(VehicleState robot, VehicleState human) {
  SystemState s;
  s.values.resize(8, 0.0);
  DrivingEnv::set_robot(s, robot);
  DrivingEnv::set_human(s, human);
  return s;
}

// Convex polygon overlap by point containment and segment crossing.
bool inside(const std::array<Vec2, 4>& poly, Vec2 p) {
  bool pos = false, neg = false;
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % 4];
    const double c = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    pos |= c > 0;
    neg |= c < 0;
  }
  return !(pos && neg);
}

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool segments_cross(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool polygon_oracle(const OrientedBox& a, const OrientedBox& b) {
  const auto pa = a.corners(), pb = b.corners();
  for (const auto& p : pa) {
    if (inside(pb, p)) return true;
  }
  for (const auto& p : pb) {
    if (inside(pa, p)) return true;
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (segments_cross(pa[i], pa[(i + 1) % 4], pb[j], pb[(j + 1) % 4])) return true;
    }
  }
  return false;
}

}  // namespace

TEST(DrivingDynamics, ConstantVelocityAdvancesY) {
  DrivingEnv env(DrivingParams::highway_block());
  SystemState s = driving_state({2.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, 1.0});
  const SystemState n = env.step_dynamics(s, {{0.0, 0.0}}, {{0.0, 0.0}});
  EXPECT_NEAR(n.values[DrivingEnv::kHY], 0.1, 1e-12);
  EXPECT_NEAR(n.values[DrivingEnv::kHX], 2.0, 1e-12);
  EXPECT_EQ(n.timestep, 1);
}

TEST(DrivingDynamics, FullBrakeIsClamped) {
  auto p = DrivingParams::highway_block();
  p.max_accel = 2.0;
  DrivingEnv env(p);
  SystemState s = driving_state({2.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, 1.0});
  const SystemState n = env.step_dynamics(s, {{0.0, 0.0}}, {{0.0, -5.0}});
  EXPECT_NEAR(n.values[DrivingEnv::kHV], 0.8, 1e-12);
}

TEST(DrivingDynamics, ReplayReproducesFinalState) {
  DrivingEnv env(DrivingParams::highway_block());
  Rng rng(8);
  const SystemState s0 = env.reset(rng);
  std::vector<RobotAction> ar;
  std::vector<HumanAction> ah;
  SystemState s = s0;
  for (int i = 0; i < 120; ++i) {
    ar.push_back({{uniform(rng, -1.5, 1.5), uniform(rng, -4.0, 4.0)}});
    ah.push_back({{uniform(rng, -1.5, 1.5), uniform(rng, -4.0, 4.0)}});
    s = env.step_dynamics(s, ar.back(), ah.back());
  }
  SystemState r = s0;
  for (int i = 0; i < 120; ++i) r = env.step_dynamics(r, ar[i], ah[i]);
  EXPECT_EQ(r, s);
}

TEST(DrivingDynamics, NaNIsHardError) {
  DrivingEnv env(DrivingParams::highway_block());
  SystemState s = driving_state({2.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, 1.0});
  EXPECT_THROW(env.step_dynamics(s, {{std::nan(""), 0.0}}, {{0.0, 0.0}}), ModelError);
  EXPECT_THROW(env.step_dynamics(s, {{0.0, 0.0}}, {{0.0, INFINITY}}), ModelError);
}

TEST(RobotReward, SlowHumanExamples) {
  DrivingEnv env(DrivingParams::highway_block());
  SystemState s = driving_state({6.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, 2.0});
  EXPECT_DOUBLE_EQ(env.robot_reward(s, RewardSpec::slow_human()), -2.0);
  s = driving_state({6.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, 0.0});
  s.collision = true;
  EXPECT_DOUBLE_EQ(env.robot_reward(s, RewardSpec::slow_human()), -10.0);
}

TEST(RobotReward, CircleNegativeDistance) {
  CircleEnv env;
  SystemState s;
  s.values.resize(6, 0.0);
  s.values[CircleEnv::kPX] = 6.5;
  s.values[CircleEnv::kEX] = 10.0;
  EXPECT_DOUBLE_EQ(env.robot_reward(s, RewardSpec::negative_distance()), -3.5);
  EXPECT_THROW(env.robot_reward(s, RewardSpec::slow_human()), ConfigurationError);
}

TEST(HumanScore, Examples) {
  DrivingEnv env(DrivingParams::highway_block());
  const auto spec = RewardSpec::human_score();
  SystemState s = driving_state({6.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, 2.0});
  EXPECT_DOUBLE_EQ(env.human_score(s, spec), 2.0);
  s.collision = true;
  EXPECT_DOUBLE_EQ(env.human_score(s, spec), -98.0);
  s = driving_state({6.0, 30.0, kHalfPi, 0.0}, {2.0, 0.0, kHalfPi, -1.0});
  EXPECT_DOUBLE_EQ(env.human_score(s, spec), -1.0);
  s.off_road = true;
  EXPECT_DOUBLE_EQ(env.human_score(s, spec), -11.0);
}

TEST(Collision, IdenticalAndSeparated) {
  DrivingEnv env(DrivingParams::highway_block());
  EXPECT_TRUE(env.detect_collision(driving_state({2, 5, kHalfPi, 1}, {2, 5, kHalfPi, 1})));
  const double radius = std::hypot(4.0, 2.0);  // two half-diagonals
  EXPECT_FALSE(
      env.detect_collision(driving_state({2, 5 + radius + 1e-6, 0.3, 1}, {2, 5, -1.1, 1})));
}

TEST(Collision, ExactlyTouchingCounts) {
  DrivingEnv env(DrivingParams::intersection());
  SystemState s;
  s.values.resize(10, -1.0);
  DrivingEnv::set_robot(s, {0.0, 0.0, 0.0, 0.0});
  DrivingEnv::set_human(s, {4.0, 0.0, 0.0, 0.0});
  EXPECT_TRUE(env.detect_collision(s));
  DrivingEnv::set_human(s, {4.0 + 1e-9, 0.0, 0.0, 0.0});
  EXPECT_FALSE(env.detect_collision(s));
  DrivingEnv::set_human(s, {0.0, 2.0, 0.0, 0.0});
  EXPECT_TRUE(env.detect_collision(s));
}

TEST(Collision, RandomPosesMatchPolygonOracle) {
  Rng rng(404);
  int hits = 0;
  for (int i = 0; i < 100; ++i) {
    OrientedBox a{{uniform(rng, -3, 3), uniform(rng, -3, 3)}, uniform(rng, -3.14, 3.14), 4.0, 2.0};
    OrientedBox b{{uniform(rng, -3, 3), uniform(rng, -3, 3)}, uniform(rng, -3.14, 3.14), 4.0, 2.0};
    const bool expected = polygon_oracle(a, b);
    hits += expected;
    EXPECT_EQ(geometry::overlaps(a, b), expected) << "pose " << i;
  }
  EXPECT_GT(hits, 10);
  EXPECT_LT(hits, 95);
}

TEST(Reset, DrivingRobotStartsAhead) {
  DrivingEnv env(DrivingParams::highway_block());
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const SystemState s = env.reset(rng);
    EXPECT_GT(s.values[DrivingEnv::kRY], s.values[DrivingEnv::kHY]);
  }
}

TEST(Reset, CircleEvaderOnRim) {
  CircleEnv env;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const SystemState s = env.reset(rng);
    EXPECT_LT(std::fabs(std::hypot(s.values[CircleEnv::kEX], s.values[CircleEnv::kEY]) - 10.0),
              1e-9);
  }
}

TEST(Reset, SameSeedSameState) {
  DrivingEnv d(DrivingParams::intersection());
  CircleEnv c;
  ReachingEnv r;
  for (const Environment* env : std::initializer_list<const Environment*>{&d, &c, &r}) {
    Rng a(77), b(77);
    EXPECT_EQ(env->reset(a), env->reset(b)) << env->name();
  }
}

TEST(CircleDynamics, EvaderStaysOnRimAndPursuerInside) {
  CircleEnv env;
  Rng rng(12);
  SystemState s = env.reset(rng);
  for (int i = 0; i < 1000; ++i) {
    s = env.step_dynamics(s, {{uniform(rng, -6, 6), uniform(rng, -6, 6)}},
                          {{uniform(rng, -20, 20)}});
    ASSERT_LT(std::fabs(std::hypot(s.values[CircleEnv::kEX], s.values[CircleEnv::kEY]) - 10.0),
              1e-9);
    ASSERT_LE(std::hypot(s.values[CircleEnv::kPX], s.values[CircleEnv::kPY]), 10.0 + 1e-12);
  }
}

TEST(CircleDynamics, ZeroEvaderActionLeavesPositionBitIdentical) {
  CircleEnv env;
  Rng rng(2);
  const SystemState s = env.reset(rng);
  const SystemState n = env.step_dynamics(s, {{1.0, 1.0}}, {{0.0}});
  EXPECT_EQ(n.values[CircleEnv::kEX], s.values[CircleEnv::kEX]);
  EXPECT_EQ(n.values[CircleEnv::kEY], s.values[CircleEnv::kEY]);
}

TEST(Reaching, HumanReachesGoalUnderOwnPolicy) {
  ReachingEnv env;
  Rng rng(4);
  SystemState s = env.reset(rng);
  const auto g = env.goal(2);
  for (int i = 0; i < 100; ++i) {
    const RobotAction ar{env.move_toward(s, ReachingEnv::kRX, env.goal(0), 0.8)};
    const HumanAction ah{env.move_toward(s, ReachingEnv::kHX, g, 1.0)};
    s = env.step_dynamics(s, ar, ah);
  }
  EXPECT_EQ(env.human_goal(s), 2);
  EXPECT_EQ(env.robot_goal(s), 0);
  EXPECT_FALSE(env.influence_success(s));
}

TEST(Options, EveryOptionWithinBounds) {
  DrivingEnv d(DrivingParams::highway_block());
  CircleEnv c;
  ReachingEnv r;
  for (const Environment* env : std::initializer_list<const Environment*>{&d, &c, &r}) {
    Rng rng(1);
    const SystemState s = env->reset(rng);
    for (int k = 0; k < env->robot_option_count(); ++k) {
      const RobotAction a = env->robot_option(k, s);
      EXPECT_TRUE(env->robot_bounds().contains(a.values)) << env->name() << " option " << k;
      EXPECT_EQ(a.option, k);
    }
    EXPECT_THROW(env->robot_option(env->robot_option_count(), s), ConfigurationError);
  }
}
