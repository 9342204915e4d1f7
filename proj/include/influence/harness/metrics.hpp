#pragma once

#include <optional>
#include <string>
#include <vector>

namespace influence {

struct MetricsRow {
  std::string algorithm;
  int human = 0;
  int interaction = 0;
  double lane_progress_m = 0.0;
  int collisions = 0;  // timesteps in collision during the interaction
  double robot_reward = 0.0;
  bool success = false;
  std::string status = "ok";  // "ok" or "failed: <reason>"
  double wall_ms = 0.0;       // not part of the deterministic metrics file

  bool failed() const { return status != "ok"; }
  bool operator==(const MetricsRow&) const = default;
};

enum class TableFormat { kCsv, kJsonLines };

// Byte-stable text; wall-clock is excluded.
std::string format_table(const std::vector<MetricsRow>& rows, TableFormat format);
// Throws std::runtime_error naming the path on I/O failure.
void emit_table(const std::vector<MetricsRow>& rows, const std::string& path, TableFormat format);
// Sidecar with (algorithm, human, interaction, wall_ms).
void emit_timing(const std::vector<MetricsRow>& rows, const std::string& path);

std::vector<MetricsRow> parse_table(const std::string& text, TableFormat format);
std::vector<MetricsRow> read_table(const std::string& path);  // format from extension

struct PairedTest {
  int pairs = 0;
  double mean_difference = 0.0;
  double sd_difference = 0.0;
  std::optional<double> t;  // empty when skipped
  std::optional<double> p;  // two-sided
  std::string note;         // "no variance", "insufficient pairs", ...
};

// Paired t-test on a - b. Fewer than 2 pairs skips with a reason; zero
// spread of the differences reports the "no variance" sentinel.
PairedTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct SeriesPoint {
  int interaction = 0;
  int n = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct AlgorithmSummary {
  std::string algorithm;
  int rows = 0;
  int failures = 0;
  double success_rate = 0.0;
  double mean_reward = 0.0;
  double mean_collisions = 0.0;
  double mean_lane_progress = 0.0;
  std::vector<SeriesPoint> success;  // per interaction index, over humans
  std::vector<SeriesPoint> reward;
  std::vector<SeriesPoint> collisions;
  std::vector<SeriesPoint> lane_progress;
};

struct Comparison {
  std::string a;
  std::string b;
  std::string pair_by;  // human | interaction
  PairedTest success;
  PairedTest reward;
};

struct Summary {
  std::vector<AlgorithmSummary> algorithms;  // in first-appearance order
  std::vector<Comparison> comparisons;       // every ordered pair (i < j)
};

// Pairing "human" compares per-human totals over interactions; "interaction"
// compares per-interaction means over humans. Throws ConfigurationError
// listing missing pairing keys when two algorithms' tables do not line up.
Summary summarize(const std::vector<MetricsRow>& rows, const std::string& pair_by);
std::string format_summary(const Summary& s);

}  // namespace influence
