#include <CLI11.hpp>

#include <iostream>

#include "influence/harness/runner.hpp"

#ifdef INFLUENCE_WITH_SERVER
#include "influence/server/server.hpp"
#endif

namespace {

using namespace influence;

int execute(ScenarioConfig cfg, bool quiet) {
  const auto result = run_experiment(cfg, [&](const std::string& alg, int human) {
    if (!quiet) std::cerr << "[" << cfg.name << "] " << alg << " human " << human << "\n";
  });
  const auto paths = write_experiment(cfg, result);
  std::vector<MetricsRow> all;
  for (const auto& spec : cfg.algorithms) {
    const auto& t = result.tables.at(spec.id);
    all.insert(all.end(), t.begin(), t.end());
  }
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  std::cout << format_summary(summarize(all, cfg.pair_by));
  if (result.any_failure) {
    for (const auto& r : all) {
      if (r.failed()) {
        std::cerr << "failure: " << r.algorithm << " human " << r.human << " interaction "
                  << r.interaction << ": " << r.status << "\n";
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated-interaction influence experiments"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  auto* run = app.add_subcommand("run", "Run a scenario config");
  std::string config_path;
  run->add_option("config", config_path, "Scenario config (JSON)")->required();

  auto* summ = app.add_subcommand("summarize", "Summarize metrics tables");
  std::vector<std::string> tables;
  std::string pair_by = "human";
  summ->add_option("tables", tables, "CSV or JSON Lines tables")->required();
  summ->add_option("--pair-by", pair_by, "Pairing key: human | interaction")
      ->check(CLI::IsMember({"human", "interaction"}));

  auto* rep = app.add_subcommand("replicate", "Run a built-in scenario");
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  int humans = 0;
  int interactions = 0;
  rep->add_option("scenario", scenario, "Built-in scenario name")
      ->required()
      ->check(CLI::IsMember(builtin_scenarios()));
  rep->add_option("--seed", seed, "Base seed");
  rep->add_option("--out", out_dir, "Output directory");
  rep->add_option("--humans", humans, "Override the number of simulated humans");
  rep->add_option("--interactions", interactions, "Override the number of interactions");

#ifdef INFLUENCE_WITH_SERVER
  auto* serve = app.add_subcommand("serve", "Run the interaction server");
  ServerOptions server_opts;
  std::string headless_script;
  serve->add_option("--port", server_opts.port, "TCP port (0 picks a free port)");
  serve->add_option("--log-dir", server_opts.log_dir, "Session log directory");
  serve->add_option("--timesteps", server_opts.timesteps, "Timesteps per interaction");
  serve->add_option("--headless-client", headless_script,
                    "Drive one session from a recorded input script and exit");
#endif

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(load_config(config_path), quiet);
    if (*rep) {
      ScenarioConfig cfg = builtin_scenario(scenario);
      cfg.seed = seed;
      cfg.output_dir = out_dir;
      if (humans > 0) cfg.humans = humans;
      if (interactions > 0) cfg.interactions = interactions;
      cfg.validate();
      return execute(cfg, quiet);
    }
    if (*summ) {
      std::vector<MetricsRow> rows;
      for (const auto& t : tables) {
        auto r = read_table(t);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      std::cout << format_summary(summarize(rows, pair_by));
      for (const auto& r : rows) {
        if (r.failed()) return 1;
      }
      return 0;
    }
#ifdef INFLUENCE_WITH_SERVER
    if (*serve) {
      if (!headless_script.empty()) return run_headless(server_opts, headless_script, std::cout);
      return run_server(server_opts);
    }
#endif
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
