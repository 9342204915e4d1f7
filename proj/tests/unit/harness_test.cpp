#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "influence/core/errors.hpp"
#include "influence/harness/config.hpp"
#include "influence/harness/metrics.hpp"
#include "influence/harness/runner.hpp"

using namespace influence;
namespace fs = std::filesystem;

namespace {

ScenarioConfig small_circle() {
  ScenarioConfig cfg;
  cfg.name = "tiny";
  cfg.environment = "circle";
  cfg.human = "circle-rules";
  cfg.interactions = 1;
  cfg.timesteps = 1;
  cfg.humans = 1;
  AlgorithmSpec a;
  a.id = "unified";
  a.planner.budget = 50;
  cfg.algorithms = {a};
  return cfg;
}

MetricsRow row(const std::string& alg, int human, int interaction, double reward, bool success) {
  MetricsRow r;
  r.algorithm = alg;
  r.human = human;
  r.interaction = interaction;
  r.robot_reward = reward;
  r.success = success;
  r.lane_progress_m = 0.25 * interaction;
  r.collisions = interaction % 2;
  return r;
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("influence_harness_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  ScenarioConfig cfg = small_circle();
  cfg.rule_prior = {0.2, 0.3, 0.5};
  cfg.seed = 99;
  cfg.pair_by = "interaction";
  cfg.human_overrides = {{"loss_threshold", 2}};
  AlgorithmSpec one;
  one.id = "one-step";
  one.lambda = 2.5;
  one.grid = {3, 3, 2, 5};
  cfg.algorithms.push_back(one);
  const ScenarioConfig back = config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(back.algorithms.size(), 2u);
  EXPECT_EQ(back.algorithms[1].lambda, 2.5);
  EXPECT_EQ(back.algorithms[1].grid.block_length, 5);
  EXPECT_EQ(back.rule_prior, cfg.rule_prior);
}

TEST(Config, ValidationNamesTheField) {
  auto expect_error = [](ScenarioConfig cfg, const std::string& needle) {
    try {
      cfg.validate();
      ADD_FAILURE() << "no error for " << needle;
    } catch (const ConfigurationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  ScenarioConfig c = small_circle();
  c.environment = "moon";
  expect_error(c, "moon");
  c = small_circle();
  c.algorithms[0].id = "psychic";
  expect_error(c, "psychic");
  c = small_circle();
  c.algorithms.clear();
  expect_error(c, "algorithms");
  c = small_circle();
  c.pair_by = "day";
  expect_error(c, "pair_by");
  c = small_circle();
  c.interactions = 1000;
  c.timesteps = 2000;
  expect_error(c, "horizon cap");
  c = small_circle();
  c.algorithms[0].planner.budget = 0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"environment", 3}}), ConfigurationError);
  EXPECT_NO_THROW(small_circle().validate());
}

TEST(Config, BuiltinScenariosValidate) {
  for (const auto& name : builtin_scenarios()) {
    EXPECT_NO_THROW(builtin_scenario(name).validate()) << name;
  }
  EXPECT_ANY_THROW(builtin_scenario("no-such-scenario"));
}

TEST(Runner, MinimalRunGivesOneFiniteRow) {
  const auto rows = run_human(small_circle(), small_circle().algorithms[0], 0);
  ASSERT_EQ(rows.size(), 1u);
  const auto& r = rows[0];
  EXPECT_EQ(r.status, "ok");
  EXPECT_EQ(r.algorithm, "unified");
  EXPECT_EQ(r.interaction, 0);
  EXPECT_TRUE(std::isfinite(r.robot_reward));
  EXPECT_TRUE(std::isfinite(r.lane_progress_m));
  EXPECT_GE(r.collisions, 0);
}

TEST(Runner, SameSeedSameRows) {
  ScenarioConfig cfg = small_circle();
  cfg.interactions = 3;
  cfg.timesteps = 3;
  cfg.humans = 2;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  ASSERT_EQ(a.tables.at("unified").size(), 6u);
  EXPECT_EQ(format_table(a.tables.at("unified"), TableFormat::kCsv),
            format_table(b.tables.at("unified"), TableFormat::kCsv));
  EXPECT_FALSE(a.any_failure);
}

TEST(Runner, ErrorsBecomeFailureRows) {
  // Grid planners need a driving environment.
  ScenarioConfig cfg = small_circle();
  AlgorithmSpec s;
  s.id = "stackelberg";
  cfg.algorithms = {s};
  const auto rows = run_human(cfg, s, 3);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].failed());
  EXPECT_EQ(rows[0].human, 3);
  EXPECT_NE(rows[0].status.find("driving"), std::string::npos) << rows[0].status;
  EXPECT_TRUE(run_experiment(cfg).any_failure);
}

TEST(Runner, InitialStateFollowsRulePrior) {
  const World world = make_world(small_circle());
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(sample_initial_state(world, {0.0, 0.0, 1.0}, rng).phi.rule_id, 2);
  }
  EXPECT_THROW(sample_initial_state(world, {1.0}, rng), ConfigurationError);
}

TEST(Stats, PairedTByHand) {
  // Differences 1, 2, 3: mean 2, sd 1, t = 2 * sqrt(3).
  const auto t = paired_t_test({3.0, 5.0, 7.0}, {2.0, 3.0, 4.0});
  EXPECT_EQ(t.pairs, 3);
  EXPECT_DOUBLE_EQ(t.mean_difference, 2.0);
  EXPECT_NEAR(t.sd_difference, 1.0, 1e-15);
  ASSERT_TRUE(t.t.has_value());
  EXPECT_NEAR(*t.t, 2.0 * std::sqrt(3.0), 1e-12);
  // Two-sided p for t(2): 1 - t / sqrt(t^2 + 2).
  EXPECT_NEAR(*t.p, 1.0 - *t.t / std::sqrt(*t.t * *t.t + 2.0), 1e-12);
}

TEST(Stats, DegenerateCases) {
  const auto flat = paired_t_test({2.0, 3.0, 4.0}, {1.0, 2.0, 3.0});
  EXPECT_EQ(flat.note, "no variance");
  EXPECT_FALSE(flat.t.has_value());
  const auto single = paired_t_test({1.0}, {0.0});
  EXPECT_EQ(single.note, "insufficient pairs");
  EXPECT_FALSE(single.p.has_value());
  EXPECT_ANY_THROW(paired_t_test({1.0, 2.0}, {1.0}));
}

TEST(Summary, PairsByHumanTotals) {
  std::vector<MetricsRow> rows;
  const double bonus[3] = {1.0, 2.0, 3.0};
  for (int h = 0; h < 3; ++h) {
    for (int k = 0; k < 2; ++k) {
      rows.push_back(row("a", h, k, 1.0 + bonus[h], true));
      rows.push_back(row("b", h, k, 1.0, false));
    }
  }
  const Summary s = summarize(rows, "human");
  ASSERT_EQ(s.algorithms.size(), 2u);
  EXPECT_EQ(s.algorithms[0].algorithm, "a");
  EXPECT_EQ(s.algorithms[0].rows, 6);
  EXPECT_DOUBLE_EQ(s.algorithms[0].success_rate, 1.0);
  EXPECT_DOUBLE_EQ(s.algorithms[1].success_rate, 0.0);
  ASSERT_EQ(s.comparisons.size(), 1u);
  // Per-human totals differ by 2, 4, 6: mean 4, sd 2.
  EXPECT_EQ(s.comparisons[0].reward.pairs, 3);
  EXPECT_DOUBLE_EQ(s.comparisons[0].reward.mean_difference, 4.0);
  EXPECT_NEAR(*s.comparisons[0].reward.t, 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_EQ(s.comparisons[0].success.note, "no variance");
  ASSERT_EQ(s.algorithms[0].reward.size(), 2u);
  EXPECT_DOUBLE_EQ(s.algorithms[0].reward[1].mean, 3.0);
}

TEST(Summary, SingleHumanSkipsWithReason) {
  const std::vector<MetricsRow> rows = {row("a", 0, 0, 1.0, true), row("b", 0, 0, 0.0, false)};
  const Summary s = summarize(rows, "human");
  EXPECT_EQ(s.comparisons[0].reward.note, "insufficient pairs");
}

TEST(Summary, MismatchedPairsListMissingKeys) {
  const std::vector<MetricsRow> rows = {row("a", 0, 0, 1.0, true), row("a", 1, 0, 1.0, true),
                                        row("b", 0, 0, 0.0, false), row("b", 2, 0, 0.0, false)};
  try {
    summarize(rows, "human");
    FAIL() << "expected an error";
  } catch (const ConfigurationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b:human=1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("a:human=2"), std::string::npos) << msg;
  }
}

TEST(Tables, EmptyTableIsHeaderOnly) {
  const auto dir = temp_dir("empty");
  emit_table({}, (dir / "t.csv").string(), TableFormat::kCsv);
  const std::string text = slurp(dir / "t.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_TRUE(read_table((dir / "t.csv").string()).empty());
  EXPECT_THROW(emit_table({}, (dir / "missing" / "t.csv").string(), TableFormat::kCsv),
               std::runtime_error);
}

TEST(Tables, RoundTripBothFormats) {
  std::vector<MetricsRow> rows = {row("unified", 0, 0, -1.5, true), row("unified", 0, 1, 0.1, false)};
  rows[1].status = "failed: planner, \"x\" timestep 3";
  rows[0].robot_reward = 1.0 / 3.0;
  for (auto fmt : {TableFormat::kCsv, TableFormat::kJsonLines}) {
    const auto back = parse_table(format_table(rows, fmt), fmt);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(back[i], rows[i]);
  }
}

TEST(Tables, SummaryFromFilesEqualsLive) {
  ScenarioConfig cfg = small_circle();
  cfg.interactions = 2;
  cfg.timesteps = 2;
  cfg.humans = 3;
  AlgorithmSpec latent;
  latent.id = "latent";
  latent.planner.budget = 50;
  cfg.algorithms.push_back(latent);
  cfg.output_dir = temp_dir("files").string();
  const auto result = run_experiment(cfg);
  const auto paths = write_experiment(cfg, result);
  ASSERT_EQ(paths.size(), 2u);
  std::vector<MetricsRow> live, read;
  for (const auto& spec : cfg.algorithms) {
    const auto& t = result.tables.at(spec.id);
    live.insert(live.end(), t.begin(), t.end());
  }
  for (const auto& p : paths) {
    const auto t = read_table(p);
    read.insert(read.end(), t.begin(), t.end());
  }
  // Wall clock lives in the sidecar only.
  for (auto& r : live) r.wall_ms = 0.0;
  EXPECT_EQ(format_summary(summarize(live, "human")), format_summary(summarize(read, "human")));
  EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / "tiny.unified.timing.csv"));
}
