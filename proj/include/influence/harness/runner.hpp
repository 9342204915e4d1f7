#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "influence/harness/config.hpp"
#include "influence/harness/controllers.hpp"
#include "influence/harness/metrics.hpp"

namespace influence {

// Per-interaction accumulation of the logged metrics.
class InteractionTally {
 public:
  void begin(const SystemState& start);
  void add(const SystemState& pre_reset, double reward);
  MetricsRow finish(const Environment& env, const SystemState& end, const std::string& algorithm,
                    int human, int interaction) const;
  const SystemState& start() const { return start_; }

 private:
  SystemState start_;
  double reward_ = 0.0;
  int collisions_ = 0;
};

// Hidden initial state of simulated human `index`: rule drawn from the prior,
// z from the model's initial strategy or uniformly from its candidates.
AugmentedState sample_initial_state(const World& world, const std::vector<double>& rule_prior,
                                    Rng& rng);

// One human under one algorithm. Errors end the run early and append a failure row.
std::vector<MetricsRow> run_human(const ScenarioConfig& cfg, const AlgorithmSpec& spec, int human);

struct ExperimentResult {
  std::map<std::string, std::vector<MetricsRow>> tables;  // by algorithm id
  bool any_failure = false;
};

using ProgressFn = std::function<void(const std::string& algorithm, int human)>;

ExperimentResult run_experiment(const ScenarioConfig& cfg, const ProgressFn& progress = {});

// Writes <dir>/<name>.<algorithm>.csv, .jsonl and .timing.csv; returns the CSV paths.
std::vector<std::string> write_experiment(const ScenarioConfig& cfg, const ExperimentResult& r);

}  // namespace influence
