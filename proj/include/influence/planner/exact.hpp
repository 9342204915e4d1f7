#pragma once

#include <span>
#include <vector>

#include "influence/planner/tabular.hpp"

namespace influence {

inline constexpr std::size_t kExactSizeLimit = 10000;

struct ExactDecision {
  int action = 0;  // lowest index among maximizers
  std::vector<double> q;
  double value = 0.0;
};

// Optimal finite-horizon decision at (t, s) under belief `b` over h, by exact
// recursion over deterministic observation branches.
ExactDecision exact_decide(const TabularMomdp& m, int t, int s, std::span<const double> b);

struct ExactSolution {
  int horizon = 0;
  int grid_resolution = 0;
  // Simplex grid over the hidden index; each point sums to 1.
  std::vector<std::vector<double>> grid;
  // [t][s][grid point]
  std::vector<std::vector<std::vector<double>>> value;
  std::vector<std::vector<std::vector<int>>> policy;

  double value_at(int t, int s, std::size_t point) const { return value[t][s][point]; }
};

// Values and policy on every grid point for t < horizon. Refuses models whose
// joint table exceeds kExactSizeLimit entries.
ExactSolution exact_value_iteration(const TabularMomdp& m, int horizon, int grid_resolution = 10);

std::vector<std::vector<double>> simplex_grid(int dims, int resolution);

}  // namespace influence
