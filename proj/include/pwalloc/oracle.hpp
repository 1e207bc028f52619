#pragma once

#include <cstdint>
#include <vector>

#include "pwalloc/model.hpp"

// Brute-force ground truth on small instances: exhaustive search over every
// grid distribution meeting the budget. Integer unit arithmetic keeps the
// budget exact; probabilities only materialize at evaluation time.

namespace pwalloc {

struct GridSpec {
  // Resolution in probability units; must divide 1 exactly (within 1e-12).
  // Steps above 0.1 are only useful for hand-checkable demonstrations.
  double step = 0.02;
  double max_points = 2e7;  // enumeration safety cap

  static GridSpec validated(double step, double max_points = 2e7);
};

struct OracleResult {
  SolveResult result;
  double effective_r = 0.0;  // budget after snapping to the grid
  bool snapped = false;
  std::uint64_t points_evaluated = 0;
};

// Enumerates all grid vectors in [0,1]^n summing to the (grid-snapped)
// budget and returns the best under the problem's sense; ties keep the
// lexicographically smallest vector. Throws too_large when the composition
// count exceeds grid.max_points.
OracleResult brute_force(const AllocationProblem& problem, const GridSpec& grid);

// Number of grid points brute_force would enumerate.
std::uint64_t composition_count(std::size_t n, std::uint64_t total_units,
                                std::uint64_t max_units);

enum class Region { concave, convex };
enum class OptSense { minimize, maximize };

struct LemmaOracleResult {
  std::vector<double> x;
  double objective = 0.0;
  std::uint64_t points_evaluated = 0;
};

// Exhaustive optimum of sum(w(x_i)) over grid points of the concave box
// [0,l]^m or the convex box [l,1]^m under a budget constraint. Budgets snap
// to the grid and must stay inside the region's admissible interval.
LemmaOracleResult lemma_oracle(Region region, OptSense sense, std::size_t m,
                               double budget, const WeightingParams& params,
                               const GridSpec& grid);

}  // namespace pwalloc
