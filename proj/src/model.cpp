#include "pwalloc/model.hpp"

#include <cmath>
#include <sstream>

namespace pwalloc {

namespace {
constexpr double kBudgetTol = 1e-8;
constexpr double kBoundTol = 1e-12;
}  // namespace

bool PriorityProfile::uniform(double tol) const noexcept {
  for (double v : t) {
    if (std::abs(v - 1.0) > tol) return false;
  }
  return true;
}

PriorityProfile normalize_priorities(std::span<const double> raw) {
  if (raw.empty()) {
    fail(Errc::out_of_range, "priority profile must not be empty");
  }
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) fail(Errc::not_finite, "priority values must be finite");
    if (!(v > 0.0)) {
      fail(Errc::non_positive_priority,
           "priorities must be strictly positive, got " + std::to_string(v));
    }
    sum += v;
  }
  const double scale = static_cast<double>(raw.size()) / sum;
  PriorityProfile profile;
  profile.t.reserve(raw.size());
  for (double v : raw) profile.t.push_back(v * scale);
  return profile;
}

PriorityProfile uniform_priorities(std::size_t n) {
  PriorityProfile profile;
  profile.t.assign(n, 1.0);
  return profile;
}

namespace {

AllocationProblem make_validated(std::size_t n, double r, Sense sense,
                                 const WeightingParams& weighting,
                                 PriorityProfile priorities) {
  if (n < 1) fail(Errc::out_of_range, "population size must be at least 1");
  if (!std::isfinite(r)) fail(Errc::not_finite, "budget r must be finite");
  if (r < 0.0 || r > static_cast<double>(n)) {
    fail(Errc::infeasible, "budget r must lie in [0, n]; got r=" +
                               std::to_string(r) + " with n=" + std::to_string(n));
  }
  validate(weighting.alpha, weighting.beta);
  if (priorities.t.size() != n) {
    fail(Errc::out_of_range, "priority profile size must equal n");
  }
  return AllocationProblem{n, r, sense, weighting, std::move(priorities)};
}

}  // namespace

AllocationProblem make_problem(std::size_t n, double r, Sense sense,
                               const WeightingParams& weighting) {
  return make_validated(n, r, sense, weighting, uniform_priorities(n));
}

AllocationProblem make_problem(std::size_t n, double r, Sense sense,
                               const WeightingParams& weighting,
                               std::span<const double> raw_priorities) {
  return make_validated(n, r, sense, weighting, normalize_priorities(raw_priorities));
}

std::string FeasibilityReport::describe() const {
  if (ok) return "feasible";
  std::ostringstream os;
  if (!size_ok) os << "size mismatch; ";
  if (!budget_ok) os << "budget slack " << budget_slack << "; ";
  for (const auto& v : bound_violations) {
    os << "p[" << v.index << "]=" << v.value << " outside [0,1]; ";
  }
  return os.str();
}

FeasibilityReport check_feasible(const AllocationProblem& problem,
                                 const Distribution& dist) {
  FeasibilityReport report;
  report.size_ok = dist.p.size() == problem.n;
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    const double v = dist.p[i];
    if (!(v >= -kBoundTol && v <= 1.0 + kBoundTol) || !std::isfinite(v)) {
      report.bound_violations.push_back({i, v});
    }
    sum += v;
  }
  report.budget_slack = sum - problem.r;
  report.budget_ok = std::abs(report.budget_slack) <= kBudgetTol;
  report.ok = report.size_ok && report.budget_ok && report.bound_violations.empty();
  return report;
}

double perceived_welfare(const AllocationProblem& problem, const Distribution& dist) {
  const FeasibilityReport report = check_feasible(problem, dist);
  if (!report.ok) {
    fail(Errc::infeasible_distribution, report.describe());
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < problem.n; ++j) {
    const double p = std::min(1.0, std::max(0.0, dist.p[j]));
    sum += problem.priorities.t[j] * eval(problem.weighting, p);
  }
  return sum;
}

}  // namespace pwalloc
