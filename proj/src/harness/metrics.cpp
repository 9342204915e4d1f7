#include "influence/harness/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "influence/core/errors.hpp"

namespace influence {

namespace {

constexpr const char* kCsvHeader =
    "algorithm,human,interaction,lane_progress_m,collisions,robot_reward,success,status";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Quotes fields holding commas or quotes; line breaks become spaces so each row stays on one line.
std::string csv_safe(std::string s) {
  bool quote = false;
  std::string out;
  for (char c : s) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == ',' || c == '"') quote = true;
    if (c == '"') out += '"';
    out += c;
  }
  return quote ? '"' + out + '"' : out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        out.back() += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string format_table(const std::vector<MetricsRow>& rows, TableFormat format) {
  std::string out;
  if (format == TableFormat::kCsv) {
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
      out += csv_safe(r.algorithm) + ',' + std::to_string(r.human) + ',' +
             std::to_string(r.interaction) + ',' + fmt(r.lane_progress_m) + ',' +
             std::to_string(r.collisions) + ',' + fmt(r.robot_reward) + ',' +
             (r.success ? "1" : "0") + ',' + csv_safe(r.status) + '\n';
    }
    return out;
  }
  for (const auto& r : rows) {
    // Doubles go through %.17g so the bytes do not depend on the JSON library.
    nlohmann::ordered_json j;
    j["algorithm"] = r.algorithm;
    j["human"] = r.human;
    j["interaction"] = r.interaction;
    j["lane_progress_m"] = fmt(r.lane_progress_m);
    j["collisions"] = r.collisions;
    j["robot_reward"] = fmt(r.robot_reward);
    j["success"] = r.success;
    j["status"] = r.status;
    out += j.dump() + '\n';
  }
  return out;
}

void emit_table(const std::vector<MetricsRow>& rows, const std::string& path, TableFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write metrics file '" + path + "'");
  out << format_table(rows, format);
  if (!out) throw std::runtime_error("write failed for metrics file '" + path + "'");
}

void emit_timing(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write timing file '" + path + "'");
  out << "algorithm,human,interaction,wall_ms\n";
  for (const auto& r : rows) {
    out << csv_safe(r.algorithm) << ',' << r.human << ',' << r.interaction << ',' << fmt(r.wall_ms)
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed for timing file '" + path + "'");
}

std::vector<MetricsRow> parse_table(const std::string& text, TableFormat format) {
  std::vector<MetricsRow> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (format == TableFormat::kCsv) {
    if (!std::getline(in, line) || line != kCsvHeader) {
      throw ConfigurationError("metrics table: unexpected header");
    }
    ++line_no;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 8) {
        throw ConfigurationError("metrics table line " + std::to_string(line_no) +
                                 ": expected 8 fields");
      }
      try {
        MetricsRow r;
        r.algorithm = f[0];
        r.human = std::stoi(f[1]);
        r.interaction = std::stoi(f[2]);
        r.lane_progress_m = std::stod(f[3]);
        r.collisions = std::stoi(f[4]);
        r.robot_reward = std::stod(f[5]);
        r.success = f[6] == "1";
        r.status = f[7];
        rows.push_back(std::move(r));
      } catch (const std::logic_error&) {
        throw ConfigurationError("metrics table line " + std::to_string(line_no) +
                                 ": malformed number");
      }
    }
    return rows;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      MetricsRow r;
      r.algorithm = j.at("algorithm").get<std::string>();
      r.human = j.at("human").get<int>();
      r.interaction = j.at("interaction").get<int>();
      r.lane_progress_m = std::stod(j.at("lane_progress_m").get<std::string>());
      r.collisions = j.at("collisions").get<int>();
      r.robot_reward = std::stod(j.at("robot_reward").get<std::string>());
      r.success = j.at("success").get<bool>();
      r.status = j.at("status").get<std::string>();
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ConfigurationError("metrics records line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<MetricsRow> read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read metrics file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const bool jsonl = path.size() >= 6 && (path.substr(path.size() - 6) == ".jsonl");
  return parse_table(ss.str(), jsonl ? TableFormat::kJsonLines : TableFormat::kCsv);
}

PairedTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ConfigurationError("paired test needs equal-length samples");
  PairedTest out;
  out.pairs = static_cast<int>(a.size());
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  out.mean_difference = mean(d);
  if (out.pairs < 2) {
    out.note = "insufficient pairs";
    return out;
  }
  out.sd_difference = sample_sd(d);
  if (!(out.sd_difference > 0.0)) {
    out.note = "no variance";
    return out;
  }
  const double t = out.mean_difference / (out.sd_difference / std::sqrt(static_cast<double>(out.pairs)));
  const boost::math::students_t dist(static_cast<double>(out.pairs - 1));
  out.t = t;
  out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return out;
}

namespace {

std::vector<SeriesPoint> series(const std::map<int, std::vector<double>>& by_interaction) {
  std::vector<SeriesPoint> out;
  for (const auto& [k, v] : by_interaction) {
    SeriesPoint p;
    p.interaction = k;
    p.n = static_cast<int>(v.size());
    p.mean = mean(v);
    p.se = v.size() > 1 ? sample_sd(v) / std::sqrt(static_cast<double>(v.size())) : 0.0;
    out.push_back(p);
  }
  return out;
}

struct Keyed {
  std::map<int, double> success;
  std::map<int, double> reward;
};

// Pairing key -> aggregated value. Humans: totals over interactions.
// Interactions: means over humans.
Keyed aggregate(const std::vector<const MetricsRow*>& rows, const std::string& pair_by) {
  Keyed k;
  std::map<int, int> counts;
  for (const auto* r : rows) {
    const int key = pair_by == "human" ? r->human : r->interaction;
    k.success[key] += r->success ? 1.0 : 0.0;
    k.reward[key] += r->robot_reward;
    counts[key] += 1;
  }
  if (pair_by == "interaction") {
    for (auto& [key, v] : k.success) v /= counts[key];
    for (auto& [key, v] : k.reward) v /= counts[key];
  }
  return k;
}

}  // namespace

Summary summarize(const std::vector<MetricsRow>& rows, const std::string& pair_by) {
  if (pair_by != "human" && pair_by != "interaction") {
    throw ConfigurationError("pair_by must be 'human' or 'interaction'");
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const MetricsRow*>> by_alg;
  for (const auto& r : rows) {
    if (!by_alg.count(r.algorithm)) order.push_back(r.algorithm);
    by_alg[r.algorithm].push_back(&r);
  }

  Summary s;
  std::map<std::string, std::vector<const MetricsRow*>> ok_rows;
  for (const auto& name : order) {
    AlgorithmSummary a;
    a.algorithm = name;
    std::map<int, std::vector<double>> succ, rew, col, lane;
    for (const auto* r : by_alg[name]) {
      ++a.rows;
      if (r->failed()) {
        ++a.failures;
        continue;
      }
      ok_rows[name].push_back(r);
      succ[r->interaction].push_back(r->success ? 1.0 : 0.0);
      rew[r->interaction].push_back(r->robot_reward);
      col[r->interaction].push_back(r->collisions);
      lane[r->interaction].push_back(r->lane_progress_m);
      a.success_rate += r->success ? 1.0 : 0.0;
      a.mean_reward += r->robot_reward;
      a.mean_collisions += r->collisions;
      a.mean_lane_progress += r->lane_progress_m;
    }
    const int n = a.rows - a.failures;
    if (n > 0) {
      a.success_rate /= n;
      a.mean_reward /= n;
      a.mean_collisions /= n;
      a.mean_lane_progress /= n;
    }
    a.success = series(succ);
    a.reward = series(rew);
    a.collisions = series(col);
    a.lane_progress = series(lane);
    s.algorithms.push_back(std::move(a));
  }

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Keyed ka = aggregate(ok_rows[order[i]], pair_by);
      const Keyed kb = aggregate(ok_rows[order[j]], pair_by);
      std::string missing;
      for (const auto& [key, v] : ka.success) {
        if (!kb.success.count(key)) missing += " " + order[j] + ":" + pair_by + "=" + std::to_string(key);
      }
      for (const auto& [key, v] : kb.success) {
        if (!ka.success.count(key)) missing += " " + order[i] + ":" + pair_by + "=" + std::to_string(key);
      }
      if (!missing.empty()) throw ConfigurationError("mismatched pairing keys, missing:" + missing);
      std::vector<double> sa, sb, ra, rb;
      for (const auto& [key, v] : ka.success) {
        sa.push_back(v);
        sb.push_back(kb.success.at(key));
        ra.push_back(ka.reward.at(key));
        rb.push_back(kb.reward.at(key));
      }
      Comparison c;
      c.a = order[i];
      c.b = order[j];
      c.pair_by = pair_by;
      c.success = paired_t_test(sa, sb);
      c.reward = paired_t_test(ra, rb);
      s.comparisons.push_back(std::move(c));
    }
  }
  return s;
}

namespace {

std::string describe(const PairedTest& t) {
  std::string out = "pairs=" + std::to_string(t.pairs) + " mean_diff=" + fmt(t.mean_difference);
  if (t.t) {
    out += " t(" + std::to_string(t.pairs - 1) + ")=" + fmt(*t.t) + " p=" + fmt(*t.p);
  } else {
    out += " t=skipped (" + t.note + ")";
  }
  return out;
}

}  // namespace

std::string format_summary(const Summary& s) {
  std::string out;
  for (const auto& a : s.algorithms) {
    out += "algorithm " + a.algorithm + ": rows=" + std::to_string(a.rows) +
           " failures=" + std::to_string(a.failures) + " success_rate=" + fmt(a.success_rate) +
           " mean_reward=" + fmt(a.mean_reward) + " mean_collisions=" + fmt(a.mean_collisions) +
           " mean_lane_progress_m=" + fmt(a.mean_lane_progress) + "\n";
  }
  for (const auto& c : s.comparisons) {
    out += "paired " + c.a + " - " + c.b + " by " + c.pair_by + ": success " +
           describe(c.success) + "; reward " + describe(c.reward) + "\n";
  }
  out += "series algorithm,interaction,n,success_mean,success_se,reward_mean,reward_se\n";
  for (const auto& a : s.algorithms) {
    for (std::size_t i = 0; i < a.success.size(); ++i) {
      out += "series " + a.algorithm + "," + std::to_string(a.success[i].interaction) + "," +
             std::to_string(a.success[i].n) + "," + fmt(a.success[i].mean) + "," +
             fmt(a.success[i].se) + "," + fmt(a.reward[i].mean) + "," + fmt(a.reward[i].se) + "\n";
    }
  }
  return out;
}

}  // namespace influence
