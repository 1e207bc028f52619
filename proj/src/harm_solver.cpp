#include "pwalloc/harm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "pwalloc/search.hpp"

namespace pwalloc {

namespace {

constexpr double kTieTol = 1e-10;

struct Candidate {
  double objective = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  double delta = 0.0;
};

bool tie_prefer(const Candidate& a, const Candidate& b) {
  // Within the tie window prefer the smaller pool, then the smaller interior
  // probability.
  if (a.k != b.k) return a.k < b.k;
  return a.delta < b.delta;
}

// Pool-size enumeration bounds implied by the structure: the pool level
// (r - delta)/k must lie in [l, 1] with delta in [0, l).
struct KRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool empty = true;
};

KRange pool_range(double r, double ell, std::size_t n) {
  KRange range;
  const double lo_real = std::ceil(r - ell - 1e-12);
  const double hi_real = std::floor(r / ell + 1e-12);
  std::size_t lo = lo_real <= 1.0 ? 1 : static_cast<std::size_t>(lo_real);
  const double hi_capped = std::min(static_cast<double>(n), hi_real);
  if (hi_capped < static_cast<double>(lo)) return range;
  range.lo = lo;
  range.hi = static_cast<std::size_t>(hi_capped);
  range.empty = false;
  return range;
}

// Feasible interval for the interior probability at pool size k, or an
// empty interval. The upper end stays strictly below the inflection.
bool delta_interval(double r, double ell, std::size_t k, double* lo, double* hi) {
  *lo = std::max(0.0, r - static_cast<double>(k));
  *hi = std::min(ell * (1.0 - 1e-12), r - static_cast<double>(k) * ell);
  return *hi >= *lo - 1e-15;
}

// Water-fill internals, parameterized once per weighting function.
struct WaterfillContext {
  double alpha, beta, ell, u_ell, log_ab, wp_ell;

  WaterfillContext(const WeightingParams& params, double inflection)
      : alpha(params.alpha),
        beta(params.beta),
        ell(inflection),
        u_ell(-std::log(inflection)),
        log_ab(std::log(params.alpha * params.beta)),
        wp_ell(eval_derivative(params, inflection)) {}

  // log w'(p) expressed in u = -log p; strictly decreasing in u on the
  // convex region, which makes the inversion a plain bisection.
  double log_slope(double u) const {
    return log_ab + (alpha - 1.0) * std::log(u) + u - beta * std::pow(u, alpha);
  }

  // Solves w'(p) = y for p in [ell, 1]; callers guarantee y >= w'(ell).
  double invert_slope(double y) const {
    const double target = std::log(y);
    double lo = 1e-18, hi = u_ell;
    double flo = log_slope(lo) - target;
    if (flo <= 0.0) return 1.0;  // slope demand beyond the representable range
    for (int i = 0; i < search::kMaxIterations && hi - lo > 1e-13; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (log_slope(mid) - target > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return std::exp(-0.5 * (lo + hi));
  }

  double level_for(double c, double t) const {
    const double y = c / t;
    if (y <= wp_ell) return ell;
    return std::min(1.0, invert_slope(y));
  }

  // Probabilities for the pool priorities `ts` under a shared constant c
  // chosen so the levels sum to `budget`.
  WaterfillResult solve(std::span<const double> ts, double budget) const {
    const std::size_t k = ts.size();
    WaterfillResult out;
    out.p.assign(k, ell);
    if (budget >= static_cast<double>(k) * (1.0 - 1e-12)) {
      std::fill(out.p.begin(), out.p.end(), 1.0);
      out.c = std::numeric_limits<double>::infinity();
      return out;
    }
    // Equal priorities split evenly; skip the nested bisection.
    const auto [tmin_it, tmax_it] = std::minmax_element(ts.begin(), ts.end());
    if (*tmax_it - *tmin_it <= 1e-15) {
      const double level = budget / static_cast<double>(k);
      std::fill(out.p.begin(), out.p.end(), level);
      out.c = *tmin_it * eval_derivative(WeightingParams{alpha, beta},
                                         std::min(level, 1.0 - 1e-15));
      return out;
    }
    const double kl = static_cast<double>(k) * ell;
    if (budget <= kl * (1.0 + 1e-12) + 1e-15) {
      out.c = *tmin_it * wp_ell;
      return out;
    }

    auto level_sum = [&](double c) {
      double s = 0.0;
      for (double t : ts) s += level_for(c, t);
      return s;
    };
    double c_lo = *tmin_it * wp_ell;
    double c_hi = std::max(2.0 * c_lo, 1.0);
    while (level_sum(c_hi) < budget && c_hi < 1e14) c_hi *= 2.0;
    double c_mid = c_hi;
    for (int i = 0; i < search::kMaxIterations; ++i) {
      c_mid = 0.5 * (c_lo + c_hi);
      const double s = level_sum(c_mid);
      if (std::abs(s - budget) <= 1e-10 || c_hi - c_lo <= 1e-14 * c_hi) break;
      if (s < budget) {
        c_lo = c_mid;
      } else {
        c_hi = c_mid;
      }
    }
    for (std::size_t i = 0; i < k; ++i) out.p[i] = level_for(c_mid, ts[i]);
    out.c = c_mid;
    return out;
  }

  double objective(std::span<const double> ts, const WaterfillResult& fill) const {
    const WeightingParams params{alpha, beta};
    double obj = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) obj += ts[i] * eval(params, fill.p[i]);
    return obj;
  }
};

void require_harm(const AllocationProblem& problem, const char* who) {
  if (problem.sense != Sense::harm) {
    fail(Errc::domain_error, std::string(who) + " requires sense=harm");
  }
}

SolveResult finish(const AllocationProblem& problem, Distribution dist,
                   HarmStructure structure, SolveMethod method) {
  SolveResult result;
  result.objective = perceived_welfare(problem, dist);
  result.distribution = std::move(dist);
  result.structure = structure;
  result.method = method;
  return result;
}

// All k-subsets of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

SolveResult solve_harm_homogeneous(const AllocationProblem& problem,
                                   const HarmSolverOptions& options) {
  require_harm(problem, "solve_harm_homogeneous");
  if (!problem.priorities.uniform()) {
    fail(Errc::domain_error,
         "solve_harm_homogeneous requires uniform priorities; use the "
         "heterogeneous solver");
  }
  const std::size_t n = problem.n;
  const double r = problem.r;
  const WeightingParams& params = problem.weighting;

  if (r == 0.0) {
    return finish(problem, Distribution{std::vector<double>(n, 0.0)},
                  HarmStructure{0, 0.0, 0.0}, SolveMethod::structured_search);
  }

  const double ell = landmarks(params).inflection;
  Candidate best;

  if (r < ell) {
    best = Candidate{eval(params, r), 0, r};
  }
  const KRange range = pool_range(r, ell, n);
  if (!range.empty) {
    for (std::size_t k = range.lo; k <= range.hi; ++k) {
      Candidate cand;
      cand.k = k;
      if (k == n) {
        // No slot left for an interior individual; the pool takes everything.
        if (r / static_cast<double>(n) < ell - 1e-12) continue;
        cand.delta = 0.0;
        cand.objective = static_cast<double>(n) * eval(params, r / static_cast<double>(n));
      } else {
        double dlo = 0.0, dhi = 0.0;
        if (!delta_interval(r, ell, k, &dlo, &dhi)) continue;
        if (dhi < dlo) dhi = dlo;
        auto g = [&](double d) {
          return eval(params, d) +
                 static_cast<double>(k) * eval(params, (r - d) / static_cast<double>(k));
        };
        const auto min = search::grid_golden_min(g, dlo, dhi, options.delta_grid_points);
        cand.delta = min.x;
        cand.objective = min.value;
      }
      if (cand.objective < best.objective - kTieTol ||
          (cand.objective <= best.objective + kTieTol && tie_prefer(cand, best))) {
        best = cand;
      }
    }
  }
  if (!std::isfinite(best.objective)) {
    fail(Errc::convergence_failure, "no feasible harm structure found");
  }

  std::vector<double> p;
  p.reserve(n);
  if (best.delta > 0.0) p.push_back(best.delta);
  const double common =
      best.k > 0 ? (r - best.delta) / static_cast<double>(best.k) : 0.0;
  p.insert(p.end(), best.k, common);
  p.resize(n, 0.0);
  return finish(problem, Distribution{std::move(p)},
                HarmStructure{best.k, best.delta, common},
                SolveMethod::structured_search);
}

WaterfillResult kkt_waterfill(std::span<const std::size_t> at_risk,
                              std::span<const double> t, double budget,
                              const WeightingParams& params) {
  if (at_risk.empty()) fail(Errc::domain_error, "at-risk set must not be empty");
  std::vector<double> ts;
  ts.reserve(at_risk.size());
  for (std::size_t idx : at_risk) {
    if (idx >= t.size()) fail(Errc::out_of_range, "at-risk index outside profile");
    if (!(t[idx] > 0.0)) fail(Errc::non_positive_priority, "priorities must be positive");
    ts.push_back(t[idx]);
  }
  const double ell = landmarks(params).inflection;
  const double k = static_cast<double>(at_risk.size());
  if (budget < k * ell - 1e-9 || budget > k + 1e-9) {
    fail(Errc::budget_out_of_range,
         "water-fill budget must lie in [" + std::to_string(k * ell) + ", " +
             std::to_string(k) + "], got " + std::to_string(budget));
  }
  const WaterfillContext ctx(params, ell);
  return ctx.solve(ts, std::min(budget, k));
}

SolveResult solve_harm_heterogeneous(const AllocationProblem& problem,
                                     const HarmSolverOptions& options) {
  require_harm(problem, "solve_harm_heterogeneous");
  const std::size_t n = problem.n;
  const double r = problem.r;
  const std::vector<double>& t = problem.priorities.t;
  const WeightingParams& params = problem.weighting;

  if (r == 0.0) {
    return finish(problem, Distribution{std::vector<double>(n, 0.0)},
                  HarmStructure{0, 0.0, 0.0}, SolveMethod::kkt_waterfill);
  }

  const double ell = landmarks(params).inflection;
  const WaterfillContext ctx(params, ell);

  // Indices sorted by ascending priority; used for the single-interior pick,
  // the heuristic subsets, and the complement scan.
  std::vector<std::size_t> by_priority(n);
  std::iota(by_priority.begin(), by_priority.end(), 0);
  std::stable_sort(by_priority.begin(), by_priority.end(),
                   [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_set;
  std::vector<double> best_levels;
  double best_delta = 0.0;
  std::size_t best_interior = n;

  if (r < ell) {
    const std::size_t i = by_priority.front();
    best_obj = t[i] * eval(params, r);
    best_delta = r;
    best_interior = i;
  }

  const double w_ell = eval(params, ell);
  const KRange range = pool_range(r, ell, n);

  auto consider_subset = [&](const std::vector<std::size_t>& set) {
    const std::size_t k = set.size();
    std::vector<double> ts(k);
    double tsum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      ts[i] = t[set[i]];
      tsum += ts[i];
    }
    // Every pool member costs at least t_j * w(ell).
    if (tsum * w_ell >= best_obj) return;

    const double kd = static_cast<double>(k);
    if (r >= kd * ell - 1e-12 && r <= kd + 1e-12) {
      const WaterfillResult fill = ctx.solve(ts, std::min(r, kd));
      const double obj = ctx.objective(ts, fill);
      if (obj < best_obj - kTieTol) {
        best_obj = obj;
        best_set = set;
        best_levels = fill.p;
        best_delta = 0.0;
        best_interior = n;
      }
    }
    if (k == n) return;
    // Cheapest complement member carries the interior probability.
    std::size_t interior = n;
    for (std::size_t idx : by_priority) {
      if (std::find(set.begin(), set.end(), idx) == set.end()) {
        interior = idx;
        break;
      }
    }
    double dlo = 0.0, dhi = 0.0;
    if (!delta_interval(r, ell, k, &dlo, &dhi)) return;
    if (dhi < dlo) dhi = dlo;
    if (dhi <= 0.0) return;  // interior case collapses to the pool-only one
    auto g = [&](double d) {
      const WaterfillResult fill = ctx.solve(ts, std::min(r - d, kd));
      return t[interior] * eval(params, d) + ctx.objective(ts, fill);
    };
    const auto min = search::grid_golden_min(g, dlo, dhi, options.subset_delta_grid_points);
    if (min.value < best_obj - kTieTol && min.x > 0.0) {
      const WaterfillResult fill = ctx.solve(ts, std::min(r - min.x, kd));
      best_obj = min.value;
      best_set = set;
      best_levels = fill.p;
      best_delta = min.x;
      best_interior = interior;
    }
  };

  if (!range.empty) {
    for (std::size_t k = range.lo; k <= range.hi; ++k) {
      if (n <= options.exhaustive_limit) {
        // Visit subsets cheapest-first so the pruning bound tightens early.
        std::vector<std::vector<std::size_t>> subsets;
        for_each_subset(n, k, [&](const std::vector<std::size_t>& set) {
          subsets.push_back(set);
        });
        std::stable_sort(subsets.begin(), subsets.end(),
                         [&](const auto& a, const auto& b) {
                           double sa = 0.0, sb = 0.0;
                           for (std::size_t i : a) sa += t[i];
                           for (std::size_t i : b) sb += t[i];
                           return sa < sb;
                         });
        for (const auto& set : subsets) consider_subset(set);
      } else {
        std::vector<std::size_t> set(by_priority.begin(), by_priority.begin() + k);
        std::sort(set.begin(), set.end());
        consider_subset(set);
      }
    }
  }
  if (!std::isfinite(best_obj)) {
    fail(Errc::convergence_failure, "no feasible harm structure found");
  }

  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < best_set.size(); ++i) p[best_set[i]] = best_levels[i];
  if (best_interior < n) p[best_interior] = best_delta;
  const std::size_t k = best_set.size();
  const double common = k > 0 ? (r - best_delta) / static_cast<double>(k) : 0.0;
  return finish(problem, Distribution{std::move(p)},
                HarmStructure{k, best_delta, common}, SolveMethod::kkt_waterfill);
}

SweepResult sweep_k(const WeightingParams& params, std::size_t n,
                    std::span<const double> r_values,
                    const HarmSolverOptions& options) {
  SweepResult sweep;
  sweep.rows.reserve(r_values.size());
  for (double r : r_values) {
    const AllocationProblem problem = make_problem(n, r, Sense::harm, params);
    const SolveResult result = solve_harm_homogeneous(problem, options);
    const auto& structure = std::get<HarmStructure>(result.structure);
    sweep.rows.push_back({r, structure.k, structure.delta, result.objective});
  }

  double r_mean = 0.0, k_mean = 0.0;
  for (const auto& row : sweep.rows) {
    r_mean += row.r;
    k_mean += static_cast<double>(row.k);
  }
  r_mean /= static_cast<double>(sweep.rows.size());
  k_mean /= static_cast<double>(sweep.rows.size());
  double num = 0.0, den = 0.0;
  for (const auto& row : sweep.rows) {
    num += (row.r - r_mean) * (static_cast<double>(row.k) - k_mean);
    den += (row.r - r_mean) * (row.r - r_mean);
  }
  sweep.slope_fit = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();

  const double ab = params.alpha * params.beta;
  if (ab > 1.0) {
    sweep.slope_theory = std::pow(ab, 1.0 / (1.0 - params.alpha));
  }
  return sweep;
}

}  // namespace pwalloc
