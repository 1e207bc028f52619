#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pwalloc/weighting.hpp"

// Problem and solution records for allocating a fixed expected amount of
// harm or benefit across a population, scored by the perceived welfare
// sum(t_j * w(p_j)).

namespace pwalloc {

enum class Sense { harm, benefit };

inline const char* to_string(Sense s) noexcept {
  return s == Sense::harm ? "harm" : "benefit";
}

// Aggregated per-individual priorities, normalized so they sum to n. The
// homogeneous case is all ones.
struct PriorityProfile {
  std::vector<double> t;

  bool uniform(double tol = 1e-12) const noexcept;
};

// Scales positive raw weights so their sum equals n. Any raw value <= 0 (or
// non-finite) is rejected.
PriorityProfile normalize_priorities(std::span<const double> raw);

PriorityProfile uniform_priorities(std::size_t n);

struct AllocationProblem {
  std::size_t n = 0;
  double r = 0.0;  // total expected harm/benefit, in [0, n]
  Sense sense = Sense::harm;
  WeightingParams weighting;
  PriorityProfile priorities;
};

// Validated constructors; r outside [0, n] has no feasible distribution.
AllocationProblem make_problem(std::size_t n, double r, Sense sense,
                               const WeightingParams& weighting);
AllocationProblem make_problem(std::size_t n, double r, Sense sense,
                               const WeightingParams& weighting,
                               std::span<const double> raw_priorities);

// A probability vector over the population; feasible when each entry lies in
// [0,1] and the entries sum to the problem budget.
struct Distribution {
  std::vector<double> p;
};

struct BoundViolation {
  std::size_t index = 0;
  double value = 0.0;
};

// Diagnostic feasibility report; never throws. Budget tolerance 1e-8.
struct FeasibilityReport {
  bool ok = false;
  bool size_ok = false;
  double budget_slack = 0.0;  // sum(p) - r
  bool budget_ok = false;
  std::vector<BoundViolation> bound_violations;

  std::string describe() const;
};

FeasibilityReport check_feasible(const AllocationProblem& problem,
                                 const Distribution& dist);

// sum(t_j * w(p_j)) under the problem's weighting. Throws
// infeasible_distribution when the distribution fails check_feasible.
double perceived_welfare(const AllocationProblem& problem, const Distribution& dist);

// Shape descriptor of a harm-minimizing solution: k individuals share the
// common at-risk level (r - delta)/k at or above the inflection, at most one
// individual carries the interior probability delta in [0, inflection), the
// rest sit at zero. For heterogeneous priorities the at-risk levels vary and
// common_p records their average.
struct HarmStructure {
  std::size_t k = 0;
  double delta = 0.0;
  double common_p = 0.0;
};

// Shape descriptor of a benefit-maximizing solution: j individuals at
// exactly 1, at most one individual at gamma inside (inflection, 1), and the
// remainder share a common level at or below the inflection.
struct BenefitStructure {
  std::size_t j = 0;
  std::optional<double> gamma;
  double common_p = 0.0;
};

enum class SolveMethod { structured_search, kkt_waterfill, multistart, oracle };

inline const char* to_string(SolveMethod m) noexcept {
  switch (m) {
    case SolveMethod::structured_search: return "structured-search";
    case SolveMethod::kkt_waterfill: return "kkt-waterfill";
    case SolveMethod::multistart: return "multistart";
    case SolveMethod::oracle: return "oracle";
  }
  return "unknown";
}

struct SolveResult {
  Distribution distribution;
  double objective = 0.0;
  std::variant<HarmStructure, BenefitStructure> structure;
  SolveMethod method = SolveMethod::structured_search;
};

}  // namespace pwalloc
