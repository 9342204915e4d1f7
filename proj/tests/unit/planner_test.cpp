#include <gtest/gtest.h>

#include <cmath>

#include "influence/core/errors.hpp"
#include "influence/planner/exact.hpp"
#include "influence/planner/pomcpow.hpp"
#include "influence/planner/qmdp.hpp"
#include "influence/planner/tabular.hpp"

using namespace influence;

namespace {

std::shared_ptr<const TabularMomdp> toy() {
  return std::make_shared<const TabularMomdp>(information_gathering_toy());
}

// Two states; action 1 moves to (or stays in) state 1, which pays 0.5^t on
// arrival at step t. Action 0 goes to state 0 and pays nothing.
TabularMomdp geometric(int horizon) {
  TabularMomdp m = TabularMomdp::make(2, 1, 2, 1, horizon);
  for (int t = 0; t < horizon; ++t) {
    for (int s = 0; s < 2; ++s) {
      m.next(t, s, 0, 0) = 0;
      m.next(t, s, 1, 0) = 1;
    }
    m.r(t, 1) = std::pow(0.5, t);
  }
  m.prior = {1.0};
  return m;
}

class ThrowingEnvironment final : public Environment {
 public:
  std::string_view name() const override { return "tabular"; }
  EpochStructure epochs() const override { return {3, 1}; }
  double dt() const override { return 1.0; }
  std::size_t state_dim() const override { return 1; }
  const ActionBounds& robot_bounds() const override { return b_; }
  const ActionBounds& human_bounds() const override { return b_; }
  SystemState reset(Rng&) const override { return TabularEnvironment::state(0, 0); }
  SystemState begin_interaction(const SystemState& e, Rng&) const override { return e; }
  SystemState step_dynamics(const SystemState&, const RobotAction&,
                            const HumanAction&) const override {
    throw ModelError("boom");
  }
  bool detect_collision(const SystemState&) const override { return false; }
  double robot_reward(const SystemState&, const RewardSpec&) const override { return 0.0; }
  double human_score(const SystemState&, const RewardSpec&) const override { return 0.0; }
  bool influence_success(const SystemState&) const override { return false; }
  int robot_option_count() const override { return 2; }
  RobotAction robot_option(int k, const SystemState&) const override {
    return {{static_cast<double>(k)}, k};
  }

 private:
  ActionBounds b_{{0.0}, {1.0}};
};

}  // namespace

TEST(ExactOracle, ToyActionValues) {
  const auto m = toy();
  const auto d = exact_decide(*m, 0, m->initial_state, m->prior);
  ASSERT_EQ(d.q.size(), 2u);
  EXPECT_DOUBLE_EQ(d.q[0], -1.0);  // wait, then guess: 0 expected
  EXPECT_DOUBLE_EQ(d.q[1], 8.0);   // probe, then answer correctly
  EXPECT_EQ(d.action, 1);
  EXPECT_DOUBLE_EQ(d.value, 8.0);
}

TEST(ExactOracle, GridPolicyAgreesWithRecursion) {
  const auto m = toy();
  const auto sol = exact_value_iteration(*m, m->horizon, 10);
  for (std::size_t g = 0; g < sol.grid.size(); ++g) {
    for (int s = 0; s < m->states; ++s) {
      for (int t = 0; t < m->horizon; ++t) {
        const auto d = exact_decide(*m, t, s, sol.grid[g]);
        EXPECT_NEAR(sol.value_at(t, s, g), d.value, 1e-12);
        EXPECT_EQ(sol.policy[t][s][g], d.action);
      }
    }
  }
}

TEST(ExactOracle, ZeroRewardIsZeroEverywhere) {
  TabularMomdp m = information_gathering_toy();
  std::fill(m.reward.begin(), m.reward.end(), 0.0);
  const auto sol = exact_value_iteration(m, m.horizon, 4);
  for (const auto& per_t : sol.value) {
    for (const auto& per_s : per_t) {
      for (double v : per_s) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(ExactOracle, HorizonZero) {
  const auto sol = exact_value_iteration(information_gathering_toy(), 0, 4);
  EXPECT_EQ(sol.horizon, 0);
  EXPECT_TRUE(sol.policy.empty());
  for (const auto& per_t : sol.value) {
    for (const auto& per_s : per_t) {
      for (double v : per_s) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(ExactOracle, GeometricClosedForm) {
  for (int h : {1, 4, 9}) {
    const TabularMomdp m = geometric(h);
    const auto sol = exact_value_iteration(m, h, 1);
    const double closed = 2.0 * (1.0 - std::pow(0.5, h));
    EXPECT_NEAR(sol.value_at(0, 0, 0), closed, 1e-9);
    EXPECT_EQ(sol.policy[0][0][0], 1);
  }
}

TEST(ExactOracle, RefusesLargeModels) {
  const TabularMomdp m = TabularMomdp::make(200, 2, 3, 3, 5);
  try {
    exact_value_iteration(m, 5);
    FAIL() << "expected refusal";
  } catch (const PlannerError& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(m.joint_size())), std::string::npos);
  }
}

TEST(ExactOracle, SimplexGridSumsToOne) {
  for (const auto& p : simplex_grid(3, 5)) {
    double s = 0.0;
    for (double v : p) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_EQ(simplex_grid(3, 5).size(), 21u);
}

TEST(Pomcpow, SingleActionModel) {
  auto m = std::make_shared<TabularMomdp>(TabularMomdp::make(2, 1, 1, 1, 3));
  m->prior = {1.0};
  const GenerativeModel model = tabular_model(m);
  for (int budget : {1, 10, 500}) {
    PlannerConfig cfg;
    cfg.budget = budget;
    Rng rng(budget);
    const auto r = pomcpow_plan(TabularEnvironment::state(0, 0), tabular_belief(*m, m->prior),
                                model, cfg, rng);
    EXPECT_EQ(r.option, 0);
  }
}

TEST(Pomcpow, BudgetOneReturnsLegalAction) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  PlannerConfig cfg;
  cfg.budget = 1;
  Rng rng(1);
  const auto r = pomcpow_plan(TabularEnvironment::state(0, 0), tabular_belief(*m, m->prior), model,
                              cfg, rng);
  EXPECT_GE(r.option, 0);
  EXPECT_LT(r.option, 2);
  EXPECT_EQ(r.stats.simulations, 1);
}

TEST(Pomcpow, PicksInformationGathering) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  PlannerConfig cfg;
  cfg.budget = 4000;
  Rng rng(12);
  const auto r = pomcpow_plan(TabularEnvironment::state(0, 0), tabular_belief(*m, m->prior), model,
                              cfg, rng);
  EXPECT_EQ(r.option, 1);
  EXPECT_EQ(r.stats.widening_violations, 0);
}

TEST(Pomcpow, DeterministicUnderSeed) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  PlannerConfig cfg;
  cfg.budget = 300;
  Rng a(42), b(42);
  const auto b0 = tabular_belief(*m, m->prior);
  const auto ra = pomcpow_plan(TabularEnvironment::state(0, 0), b0, model, cfg, a);
  const auto rb = pomcpow_plan(TabularEnvironment::state(0, 0), b0, model, cfg, b);
  EXPECT_EQ(ra.option, rb.option);
  EXPECT_EQ(ra.root_visits, rb.root_visits);
  EXPECT_EQ(ra.root_q, rb.root_q);
  EXPECT_EQ(a(), b());
}

TEST(Pomcpow, WideningBoundHoldsAtRoot) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  for (double k : {0.5, 1.0, 3.0}) {
    PlannerConfig cfg;
    cfg.budget = 200;
    cfg.k_action = k;
    cfg.alpha_action = 0.25;
    Rng rng(3);
    const auto r = pomcpow_plan(TabularEnvironment::state(0, 0), tabular_belief(*m, m->prior),
                                model, cfg, rng);
    EXPECT_EQ(r.stats.widening_violations, 0);
    int expanded = 0, visits = 0;
    for (int v : r.root_visits) {
      expanded += v > 0;
      visits += v;
    }
    EXPECT_LE(expanded, std::max(1.0, std::ceil(k * std::pow(visits, 0.25))));
  }
}

TEST(Pomcpow, AgreementGrowsWithBudget) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  const auto b0 = tabular_belief(*m, m->prior);
  auto agreement = [&](int budget) {
    int agree = 0;
    for (int seed = 0; seed < 40; ++seed) {
      PlannerConfig cfg;
      cfg.budget = budget;
      Rng rng(derive_seed(7, seed));
      agree += pomcpow_plan(TabularEnvironment::state(0, 0), b0, model, cfg, rng).option == 1;
    }
    return agree;
  };
  const int low = agreement(4), mid = agreement(100), high = agreement(3000);
  EXPECT_LE(low, mid);
  EXPECT_LE(mid, high);
  EXPECT_EQ(high, 40);
}

TEST(Pomcpow, StepFailureCarriesContext) {
  auto env = std::make_shared<const ThrowingEnvironment>();
  auto tab = std::make_shared<TabularMomdp>(TabularMomdp::make(1, 1, 2, 1, 3));
  const GenerativeModel model(env, std::make_shared<const TabularHuman>(tab), RewardSpec::tabular());
  PlannerConfig cfg;
  cfg.budget = 5;
  Rng rng(1);
  try {
    pomcpow_plan(TabularEnvironment::state(0, 0), Belief::point({0.0}, {0, {}}), model, cfg, rng);
    FAIL() << "expected a planner error";
  } catch (const PlannerError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("timestep 0"), std::string::npos);
    EXPECT_NE(what.find("boom"), std::string::npos);
  }
}

TEST(PlannerConfig, RejectsInvalid) {
  PlannerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.budget = 0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = {};
  c.alpha_obs = 1.5;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = {};
  c.discount = 0.0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = {};
  c.lookahead_interactions = 0;
  EXPECT_THROW(c.validate(), ConfigurationError);
}

TEST(SearchHorizon, WindowCappedAtEpisodeEnd) {
  const EpochStructure ep{10, 5};
  EXPECT_EQ(search_horizon_end(ep, 0, 1), 10);
  EXPECT_EQ(search_horizon_end(ep, 13, 2), 30);
  EXPECT_EQ(search_horizon_end(ep, 42, 3), 50);
}

TEST(Qmdp, PicksNonGatheringAction) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  const auto r = qmdp_plan(TabularEnvironment::state(0, 0), tabular_belief(*m, m->prior), model,
                           exact_q_evaluator(m));
  EXPECT_EQ(r.option, 0);
  EXPECT_DOUBLE_EQ(r.q[0], 9.0);
  EXPECT_DOUBLE_EQ(r.q[1], 8.0);
}

TEST(Qmdp, DegenerateWeightsFollowFirstHypothesis) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  const SystemState last = TabularEnvironment::state(0, 2);
  const std::vector<double> w0 = {1.0, 0.0}, w1 = {0.0, 1.0};
  EXPECT_EQ(qmdp_plan(last, tabular_belief(*m, w0), model, exact_q_evaluator(m)).option, 0);
  EXPECT_EQ(qmdp_plan(last, tabular_belief(*m, w1), model, exact_q_evaluator(m)).option, 1);
}

TEST(Qmdp, PointBeliefMatchesFullyObservedPlan) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  const auto q = exhaustive_q_evaluator(model, 1, 1);
  for (int t = 0; t < m->horizon; ++t) {
    for (int s = 0; s < m->states; ++s) {
      for (int h = 0; h < m->hidden; ++h) {
        std::vector<double> w(2, 0.0);
        w[h] = 1.0;
        const SystemState x = TabularEnvironment::state(s, t);
        EXPECT_EQ(qmdp_plan(x, tabular_belief(*m, w), model, q).option,
                  exact_decide(*m, t, s, w).action);
      }
    }
  }
}

TEST(Qmdp, RejectsParticleBelief) {
  const auto m = toy();
  const GenerativeModel model = tabular_model(m);
  Rng rng(1);
  const Belief pf = Belief::sample_particles(tabular_belief(*m, m->prior), 10, rng);
  EXPECT_THROW(qmdp_plan(TabularEnvironment::state(0, 0), pf, model, exact_q_evaluator(m)),
               ConfigurationError);
}
