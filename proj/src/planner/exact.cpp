#include "influence/planner/exact.hpp"

#include <functional>
#include <map>

#include "influence/core/errors.hpp"

namespace influence {

namespace {

double value(const TabularMomdp& m, int horizon, int t, int s, const std::vector<double>& b);

std::vector<double> q_values(const TabularMomdp& m, int horizon, int t, int s,
                             const std::vector<double>& b) {
  std::vector<double> q(m.robot_actions, 0.0);
  for (int a = 0; a < m.robot_actions; ++a) {
    // Group hypotheses by the observation (s', a_h) they would produce.
    std::map<std::pair<int, int>, std::vector<double>> branches;
    for (int h = 0; h < m.hidden; ++h) {
      if (b[h] <= 0) continue;
      const int a_h = m.human(t, s, h);
      const int s_next = m.next(t, s, a, a_h);
      auto& post = branches[{s_next, a_h}];
      if (post.empty()) post.assign(m.hidden, 0.0);
      post[h] = b[h];
    }
    double total = 0.0;
    for (auto& [obs, post] : branches) {
      double mass = 0.0;
      for (double w : post) mass += w;
      for (double& w : post) w /= mass;
      total += mass * (m.r(t, obs.first) + value(m, horizon, t + 1, obs.first, post));
    }
    q[a] = total;
  }
  return q;
}

double value(const TabularMomdp& m, int horizon, int t, int s, const std::vector<double>& b) {
  if (t >= horizon) return 0.0;
  const auto q = q_values(m, horizon, t, s, b);
  double best = q[0];
  for (double v : q) best = std::max(best, v);
  return best;
}

int argmax_lowest(const std::vector<double>& q) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(q.size()); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

void check_size(const TabularMomdp& m) {
  m.validate();
  const std::size_t size = m.joint_size();
  if (size > kExactSizeLimit) {
    throw PlannerError("exact value iteration refused: joint table has " + std::to_string(size) +
                       " entries (limit " + std::to_string(kExactSizeLimit) + ")");
  }
}

}  // namespace

ExactDecision exact_decide(const TabularMomdp& m, int t, int s, std::span<const double> b) {
  check_size(m);
  if (t < 0 || t >= m.horizon) throw PlannerError("exact_decide: t outside the horizon");
  std::vector<double> belief(b.begin(), b.end());
  if (static_cast<int>(belief.size()) != m.hidden) throw PlannerError("belief size mismatch");
  ExactDecision d;
  d.q = q_values(m, m.horizon, t, s, belief);
  d.action = argmax_lowest(d.q);
  d.value = d.q[d.action];
  return d;
}

std::vector<std::vector<double>> simplex_grid(int dims, int resolution) {
  std::vector<std::vector<double>> out;
  std::vector<int> counts(dims, 0);
  // Enumerate compositions of `resolution` into `dims` parts, lexicographically.
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == dims - 1) {
      counts[i] = left;
      std::vector<double> p(dims);
      for (int k = 0; k < dims; ++k) p[k] = static_cast<double>(counts[k]) / resolution;
      out.push_back(std::move(p));
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  if (dims == 1) return {{1.0}};
  rec(0, resolution);
  return out;
}

ExactSolution exact_value_iteration(const TabularMomdp& m, int horizon, int grid_resolution) {
  check_size(m);
  if (horizon < 0 || horizon > m.horizon) throw PlannerError("horizon outside the model's tables");
  if (grid_resolution < 1) throw PlannerError("grid resolution must be positive");
  ExactSolution sol;
  sol.horizon = horizon;
  sol.grid_resolution = grid_resolution;
  sol.grid = simplex_grid(m.hidden, grid_resolution);
  // Tables cover t = 0..horizon; the last layer is the terminal zero value.
  const int offset = m.horizon - horizon;
  sol.value.assign(horizon + 1, std::vector<std::vector<double>>(
                                    m.states, std::vector<double>(sol.grid.size(), 0.0)));
  sol.policy.assign(horizon, std::vector<std::vector<int>>(m.states,
                                                           std::vector<int>(sol.grid.size(), 0)));
  for (int k = 0; k < horizon; ++k) {
    const int t = offset + k;
    for (int s = 0; s < m.states; ++s) {
      for (std::size_t g = 0; g < sol.grid.size(); ++g) {
        const auto q = q_values(m, m.horizon, t, s, sol.grid[g]);
        const int a = argmax_lowest(q);
        sol.policy[k][s][g] = a;
        sol.value[k][s][g] = q[a];
      }
    }
  }
  return sol;
}

}  // namespace influence
