#pragma once

#include <cstddef>

#include "pwalloc/model.hpp"

// Perceived-benefit maximization. Small budgets favor wide uniform lotteries;
// large budgets favor a two-tier shape with a group served with certainty and
// a uniform lottery over the rest, possibly with one intermediate level.

namespace pwalloc {

struct BenefitSolverOptions {
  // Grid density for the intermediate-probability line search.
  int gamma_grid_points = 1000;
  // Ascent pass cap and per-pair transfer grid for the heterogeneous solver.
  int max_ascent_passes = 500;
  int transfer_grid_points = 33;
};

// Global maximizer of sum(w(p_i)) for uniform priorities, found by
// enumerating the number of individuals served with certainty, with and
// without one intermediate probability. Output order: the common lottery
// levels first, then the intermediate level, then the certain ones.
SolveResult solve_benefit_homogeneous(const AllocationProblem& problem,
                                      const BenefitSolverOptions& options = {});

// Multi-start pairwise-transfer ascent for strictly positive priorities
// (starts: uniform, aligned homogeneous optimum, priority-proportional).
// The returned local maximizer has every component strictly positive; global
// optimality is not certified, hence method = multistart.
SolveResult solve_benefit_heterogeneous(const AllocationProblem& problem,
                                        const BenefitSolverOptions& options = {});

struct UniformityThreshold {
  int n = 0;              // smallest n with 1/(n-1) below the unit-slope point
  double unit_slope_q = 0.0;
  bool heuristic = false; // true when beta != 1, outside the proven regime
};

// Population size beyond which the budget-1 benefit optimum is the uniform
// lottery. Uses the sufficient condition 1/(n-1) < q, so the returned value
// is a conservative upper bound on the tight threshold.
UniformityThreshold uniformity_threshold(const WeightingParams& params);

// Smallest budget at which the benefit optimum first serves someone with
// certainty, located by bisection to resolution 1e-3. Always lies in
// [q*n, (n-1)*l + 1].
double min_r_certain(const WeightingParams& params, std::size_t n);

}  // namespace pwalloc
