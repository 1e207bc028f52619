#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pwalloc/model.hpp"

// Perceived-harm minimization. Optimal allocations concentrate the budget on
// a bounded at-risk pool: at most one individual carries an interior
// probability below the inflection point, everyone in the pool sits at or
// above it, and the rest are at zero.

namespace pwalloc {

struct HarmSolverOptions {
  // Grid density for the interior-probability line search.
  int delta_grid_points = 1000;
  // Coarser grid used inside the per-subset search of the heterogeneous
  // solver, where each probe costs a full water-fill.
  int subset_delta_grid_points = 33;
  // Above this population size the heterogeneous solver switches from
  // exhaustive subset search to the lowest-priority-subset heuristic.
  std::size_t exhaustive_limit = 10;
};

// Global minimizer of sum(w(p_i)) for uniform priorities, found by
// enumerating pool sizes k and optimizing the interior probability for each.
// Output order: interior individual first (when nonzero), then the k pool
// members, then zeros.
SolveResult solve_harm_homogeneous(const AllocationProblem& problem,
                                   const HarmSolverOptions& options = {});

// Minimizer of sum(t_j w(p_j)) for strictly positive priorities. Searches
// at-risk subsets (exhaustively up to options.exhaustive_limit, lowest-t
// subsets beyond) and solves each pool by KKT water-filling. Output keeps the
// problem's indexing.
SolveResult solve_harm_heterogeneous(const AllocationProblem& problem,
                                     const HarmSolverOptions& options = {});

struct WaterfillResult {
  std::vector<double> p;  // aligned with the at-risk set, each in [l, 1]
  double c = 0.0;         // shared value of t_j * w'(p_j) at interior levels
};

// Spreads `budget` over the at-risk individuals so that t_j * w'(p_j) is a
// common constant c wherever the level is strictly inside (l, 1); levels
// clamp at the interval ends. Requires budget in [|at_risk|*l, |at_risk|].
WaterfillResult kkt_waterfill(std::span<const std::size_t> at_risk,
                              std::span<const double> t, double budget,
                              const WeightingParams& params);

struct SweepRow {
  double r = 0.0;
  std::size_t k = 0;
  double delta = 0.0;
  double objective = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope_fit = 0.0;  // least-squares slope of k against r
  // (alpha*beta)^(1/(1-alpha)); absent when alpha*beta <= 1, where the
  // closed-form derivation does not apply.
  std::optional<double> slope_theory;
};

// Runs the homogeneous solver across budgets and reports the pool-size
// growth against the closed-form slope constant.
SweepResult sweep_k(const WeightingParams& params, std::size_t n,
                    std::span<const double> r_values,
                    const HarmSolverOptions& options = {});

}  // namespace pwalloc
