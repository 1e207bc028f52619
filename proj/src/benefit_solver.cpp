#include "pwalloc/benefit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pwalloc/search.hpp"

namespace pwalloc {

namespace {

constexpr double kTieTol = 1e-10;

void require_benefit(const AllocationProblem& problem, const char* who) {
  if (problem.sense != Sense::benefit) {
    fail(Errc::domain_error, std::string(who) + " requires sense=benefit");
  }
}

SolveResult finish(const AllocationProblem& problem, Distribution dist,
                   BenefitStructure structure, SolveMethod method) {
  SolveResult result;
  result.objective = perceived_welfare(problem, dist);
  result.distribution = std::move(dist);
  result.structure = std::move(structure);
  result.method = method;
  return result;
}

struct Candidate {
  double objective = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  bool has_gamma = false;
  double gamma = 0.0;
  double common = 0.0;
};

// Prefer fewer certain winners, then the plain two-level shape, then the
// smaller intermediate probability.
bool tie_prefer(const Candidate& a, const Candidate& b) {
  if (a.j != b.j) return a.j < b.j;
  if (a.has_gamma != b.has_gamma) return !a.has_gamma;
  return a.gamma < b.gamma;
}

}  // namespace

SolveResult solve_benefit_homogeneous(const AllocationProblem& problem,
                                      const BenefitSolverOptions& options) {
  require_benefit(problem, "solve_benefit_homogeneous");
  if (!problem.priorities.uniform()) {
    fail(Errc::domain_error,
         "solve_benefit_homogeneous requires uniform priorities; use the "
         "heterogeneous solver");
  }
  const std::size_t n = problem.n;
  const double r = problem.r;
  const WeightingParams& params = problem.weighting;
  const double ell = landmarks(params).inflection;

  Candidate best;
  const std::size_t j_max =
      std::min(n, static_cast<std::size_t>(std::floor(r + 1e-12)));
  for (std::size_t j = 0; j <= j_max; ++j) {
    const double jd = static_cast<double>(j);
    const std::size_t m = n - j;
    if (m == 0) {
      if (std::abs(r - jd) <= 1e-9) {
        Candidate cand{jd, j, false, 0.0, 0.0};
        if (cand.objective > best.objective + kTieTol ||
            (cand.objective >= best.objective - kTieTol && tie_prefer(cand, best))) {
          best = cand;
        }
      }
      continue;
    }

    // Plain shape: the remaining budget spread evenly at or below the
    // inflection.
    const double level = (r - jd) / static_cast<double>(m);
    if (level >= -1e-15 && level <= ell + 1e-15) {
      const double x = std::clamp(level, 0.0, 1.0);
      Candidate cand{jd + static_cast<double>(m) * eval(params, x), j, false, 0.0, x};
      if (cand.objective > best.objective + kTieTol ||
          (cand.objective >= best.objective - kTieTol && tie_prefer(cand, best))) {
        best = cand;
      }
    }

    // Shape with one intermediate probability strictly inside (ell, 1).
    const std::size_t mp = n - j - 1;
    const double budget = r - jd;
    if (mp == 0) {
      if (budget > ell * (1.0 + 1e-12) && budget < 1.0 - 1e-12) {
        Candidate cand{jd + eval(params, budget), j, true, budget, 0.0};
        if (cand.objective > best.objective + kTieTol ||
            (cand.objective >= best.objective - kTieTol && tie_prefer(cand, best))) {
          best = cand;
        }
      }
      continue;
    }
    const double glo =
        std::max(ell * (1.0 + 1e-12), budget - static_cast<double>(mp) * ell);
    const double ghi = std::min(1.0 - 1e-12, budget);
    if (ghi <= glo) continue;
    auto negated = [&](double g) {
      return -(eval(params, g) +
               static_cast<double>(mp) * eval(params, (budget - g) / static_cast<double>(mp)));
    };
    const auto min = search::grid_golden_min(negated, glo, ghi, options.gamma_grid_points);
    Candidate cand{jd - min.value, j, true, min.x,
                   (budget - min.x) / static_cast<double>(mp)};
    if (cand.objective > best.objective + kTieTol ||
        (cand.objective >= best.objective - kTieTol && tie_prefer(cand, best))) {
      best = cand;
    }
  }
  if (!std::isfinite(best.objective)) {
    fail(Errc::convergence_failure, "no feasible benefit structure found");
  }

  std::vector<double> p;
  p.reserve(n);
  const std::size_t pool = n - best.j - (best.has_gamma ? 1 : 0);
  p.insert(p.end(), pool, best.common);
  if (best.has_gamma) p.push_back(best.gamma);
  p.insert(p.end(), best.j, 1.0);
  BenefitStructure structure{best.j,
                             best.has_gamma ? std::optional<double>(best.gamma)
                                            : std::nullopt,
                             pool > 0 ? best.common : 0.0};
  return finish(problem, Distribution{std::move(p)}, std::move(structure),
                SolveMethod::structured_search);
}

namespace {

double weighted_objective(const AllocationProblem& problem,
                          const std::vector<double>& p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += problem.priorities.t[i] * eval(problem.weighting, p[i]);
  }
  return sum;
}

// Repeated exact line searches over pairwise transfers that preserve the
// budget; stops when a full pass improves less than 1e-10.
void pairwise_ascent(const AllocationProblem& problem,
                     const BenefitSolverOptions& options, std::vector<double>& p) {
  const std::size_t n = problem.n;
  const std::vector<double>& t = problem.priorities.t;
  const WeightingParams& params = problem.weighting;
  auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };

  for (int pass = 0; pass < options.max_ascent_passes; ++pass) {
    double gained = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double lo = -std::min(p[i], 1.0 - p[j]);
        const double hi = std::min(1.0 - p[i], p[j]);
        if (hi - lo < 1e-14) continue;
        auto negated = [&](double theta) {
          return -(t[i] * eval(params, clamp01(p[i] + theta)) +
                   t[j] * eval(params, clamp01(p[j] - theta)));
        };
        const double base = negated(0.0);
        const auto min =
            search::grid_golden_min(negated, lo, hi, options.transfer_grid_points);
        if (min.value < base - 1e-13) {
          p[i] = clamp01(p[i] + min.x);
          p[j] = clamp01(p[j] - min.x);
          gained += base - min.value;
        }
      }
    }
    if (gained < 1e-10) break;
  }
}

BenefitStructure classify_benefit(const std::vector<double>& p, double ell) {
  BenefitStructure structure;
  std::vector<double> interior;
  double pool_sum = 0.0;
  std::size_t pool_count = 0;
  for (double v : p) {
    if (v >= 1.0 - 1e-9) {
      ++structure.j;
    } else if (v > ell + 1e-9) {
      interior.push_back(v);
    } else {
      pool_sum += v;
      ++pool_count;
    }
  }
  if (interior.size() == 1) structure.gamma = interior.front();
  if (pool_count > 0) {
    structure.common_p = pool_sum / static_cast<double>(pool_count);
  }
  return structure;
}

}  // namespace

SolveResult solve_benefit_heterogeneous(const AllocationProblem& problem,
                                        const BenefitSolverOptions& options) {
  require_benefit(problem, "solve_benefit_heterogeneous");
  const std::size_t n = problem.n;
  const double r = problem.r;
  const std::vector<double>& t = problem.priorities.t;
  const double ell = landmarks(problem.weighting).inflection;

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, r / static_cast<double>(n));

  {
    // Homogeneous optimum with its levels handed to individuals in priority
    // order (largest level to largest t).
    AllocationProblem uniform_problem = problem;
    uniform_problem.priorities = uniform_priorities(n);
    const SolveResult homog = solve_benefit_homogeneous(uniform_problem, options);
    std::vector<double> levels = homog.distribution.p;
    std::sort(levels.begin(), levels.end(), std::greater<double>());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return t[a] > t[b]; });
    std::vector<double> aligned(n, 0.0);
    for (std::size_t pos = 0; pos < n; ++pos) aligned[order[pos]] = levels[pos];
    starts.push_back(std::move(aligned));
  }

  {
    // Proportional to priority, with mass above 1 re-spread over the rest.
    std::vector<double> prop(n);
    for (std::size_t i = 0; i < n; ++i) {
      prop[i] = std::min(1.0, r * t[i] / static_cast<double>(n));
    }
    for (int iter = 0; iter < 200; ++iter) {
      const double sum = std::accumulate(prop.begin(), prop.end(), 0.0);
      const double deficit = r - sum;
      if (std::abs(deficit) < 1e-12) break;
      std::size_t free_count = 0;
      for (double v : prop) {
        if (v < 1.0 - 1e-15) ++free_count;
      }
      if (free_count == 0) break;
      const double add = deficit / static_cast<double>(free_count);
      for (double& v : prop) {
        if (v < 1.0 - 1e-15) v = std::clamp(v + add, 0.0, 1.0);
      }
    }
    starts.push_back(std::move(prop));
  }

  double best_obj = -std::numeric_limits<double>::infinity();
  std::vector<double> best_p;
  for (auto& start : starts) {
    pairwise_ascent(problem, options, start);
    const double obj = weighted_objective(problem, start);
    if (obj > best_obj + 1e-15) {
      best_obj = obj;
      best_p = start;
    }
  }

  if (r > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(best_p[i] > 0.0)) {
        fail(Errc::convergence_failure,
             "ascent returned a zero component despite positive budget");
      }
    }
  }
  BenefitStructure structure = classify_benefit(best_p, ell);
  return finish(problem, Distribution{std::move(best_p)}, std::move(structure),
                SolveMethod::multistart);
}

UniformityThreshold uniformity_threshold(const WeightingParams& params) {
  const WeightingLandmarks lm = landmarks(params);
  UniformityThreshold out;
  out.unit_slope_q = lm.unit_slope;
  out.heuristic = params.beta != 1.0;
  int n = 2;
  while (1.0 / static_cast<double>(n - 1) >= lm.unit_slope) {
    ++n;
    if (n > 100000000) {
      fail(Errc::convergence_failure, "uniformity threshold did not resolve");
    }
  }
  out.n = n;
  return out;
}

double min_r_certain(const WeightingParams& params, std::size_t n) {
  if (n < 2) fail(Errc::out_of_range, "min_r_certain requires n >= 2");
  const WeightingLandmarks lm = landmarks(params);
  const double nd = static_cast<double>(n);
  double lo = lm.unit_slope * nd;
  double hi = (nd - 1.0) * lm.inflection + 1.0;

  auto serves_with_certainty = [&](double r) {
    const AllocationProblem problem = make_problem(n, r, Sense::benefit, params);
    const SolveResult result = solve_benefit_homogeneous(problem);
    const auto& s = std::get<BenefitStructure>(result.structure);
    return s.j >= 1 || (s.gamma.has_value() && *s.gamma > 1.0 - 1e-9);
  };

  if (serves_with_certainty(lo)) return lo;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (serves_with_certainty(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace pwalloc
