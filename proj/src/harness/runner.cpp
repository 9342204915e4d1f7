#include "influence/harness/runner.hpp"

#include <chrono>
#include <filesystem>

#include "influence/core/errors.hpp"

namespace influence {

void InteractionTally::begin(const SystemState& start) {
  start_ = start;
  reward_ = 0.0;
  collisions_ = 0;
}

void InteractionTally::add(const SystemState& pre_reset, double reward) {
  reward_ += reward;
  if (pre_reset.collision) ++collisions_;
}

MetricsRow InteractionTally::finish(const Environment& env, const SystemState& end,
                                    const std::string& algorithm, int human,
                                    int interaction) const {
  MetricsRow row;
  row.algorithm = algorithm;
  row.human = human;
  row.interaction = interaction;
  row.lane_progress_m = env.lane_progress(start_, end);
  row.collisions = collisions_;
  row.robot_reward = reward_;
  row.success = env.influence_success(end);
  return row;
}

AugmentedState sample_initial_state(const World& world, const std::vector<double>& rule_prior,
                                    Rng& rng) {
  const HumanModel& human = *world.human;
  const int rules = human.rule_count();
  int rule = 0;
  if (rule_prior.empty()) {
    rule = uniform_int(rng, 0, rules - 1);
  } else {
    if (static_cast<int>(rule_prior.size()) != rules) {
      throw ConfigurationError("rule_prior needs " + std::to_string(rules) + " entries");
    }
    rule = std::discrete_distribution<int>(rule_prior.begin(), rule_prior.end())(rng);
  }
  AugmentedState x;
  x.s = world.env->reset(rng);
  x.phi = human.initial_rule(rule);
  if (auto z = human.initial_strategy(x.s, x.phi)) {
    x.z = *z;
  } else {
    const auto zs = human.strategy_candidates();
    if (zs.empty()) throw ConfigurationError("human model declares no strategy candidates");
    x.z = zs[uniform_int(rng, 0, static_cast<int>(zs.size()) - 1)];
  }
  return x;
}

std::vector<MetricsRow> run_human(const ScenarioConfig& cfg, const AlgorithmSpec& spec, int human) {
  using Clock = std::chrono::steady_clock;
  std::vector<MetricsRow> rows;
  int interaction = 0;
  try {
    const World world = make_world(cfg);
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(human));
    // Same world stream for every algorithm so humans are paired.
    Rng world_rng(seed);
    Rng robot_rng(derive_seed(seed, 0xC0FFEE));
    auto controller = make_controller(spec, world, cfg);

    AugmentedState x = sample_initial_state(world, cfg.rule_prior, world_rng);
    controller->reset(x.s, robot_rng);
    InteractionTally tally;
    tally.begin(x.s);
    auto t0 = Clock::now();
    const int horizon = world.env->epochs().horizon();
    for (int t = 0; t < horizon; ++t) {
      const RobotAction a_r = controller->act(x.s, robot_rng);
      const StepResult r = world.model.step(x, a_r, world_rng);
      tally.add(r.obs.interaction_end ? *r.obs.interaction_end : r.next.s, r.reward);
      controller->observe(x.s, a_r, r.obs, robot_rng);
      if (r.interaction_ended) {
        MetricsRow row = tally.finish(*world.env, *r.obs.interaction_end, spec.id, human, interaction);
        const auto t1 = Clock::now();
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        t0 = t1;
        rows.push_back(std::move(row));
        ++interaction;
        tally.begin(r.next.s);
      }
      x = r.next;
    }
  } catch (const std::exception& e) {
    MetricsRow row;
    row.algorithm = spec.id;
    row.human = human;
    row.interaction = interaction;
    row.status = std::string("failed: ") + e.what();
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentResult run_experiment(const ScenarioConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  make_world(cfg);  // surfaces configuration errors before any run
  ExperimentResult out;
  for (const auto& spec : cfg.algorithms) {
    auto& table = out.tables[spec.id];
    for (int h = 0; h < cfg.humans; ++h) {
      if (progress) progress(spec.id, h);
      auto rows = run_human(cfg, spec, h);
      for (auto& r : rows) {
        if (r.failed()) out.any_failure = true;
        table.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<std::string> write_experiment(const ScenarioConfig& cfg, const ExperimentResult& r) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + cfg.output_dir + "'");
  std::vector<std::string> paths;
  for (const auto& spec : cfg.algorithms) {
    const auto it = r.tables.find(spec.id);
    if (it == r.tables.end()) continue;
    const std::string base = (fs::path(cfg.output_dir) / (cfg.name + "." + spec.id)).string();
    emit_table(it->second, base + ".csv", TableFormat::kCsv);
    emit_table(it->second, base + ".jsonl", TableFormat::kJsonLines);
    emit_timing(it->second, base + ".timing.csv");
    paths.push_back(base + ".csv");
  }
  return paths;
}

}  // namespace influence
