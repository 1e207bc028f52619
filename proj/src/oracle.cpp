#include "pwalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pwalloc/weighting.hpp"

namespace pwalloc {

namespace {

// Enumerates assignments of `total` units over positions lo..n-1 with each
// coordinate in [min_units, max_units], accumulating the weighted objective
// along the way. Keeps the strictly best point, so the lexicographically
// smallest vector wins ties.
struct Enumerator {
  std::size_t n;
  std::int64_t min_units;
  std::int64_t max_units;
  const std::vector<double>& unit_value;  // w at each grid multiple
  const std::vector<double>& t;
  bool maximize;

  std::vector<std::int64_t> current;
  std::vector<std::int64_t> best;
  double best_objective;
  std::uint64_t visited = 0;

  Enumerator(std::size_t n_, std::int64_t min_u, std::int64_t max_u,
             const std::vector<double>& values, const std::vector<double>& t_,
             bool maximize_)
      : n(n_),
        min_units(min_u),
        max_units(max_u),
        unit_value(values),
        t(t_),
        maximize(maximize_),
        current(n_, 0),
        best_objective(maximize_ ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity()) {}

  void run(std::size_t pos, std::int64_t remaining, double acc) {
    if (pos == n - 1) {
      if (remaining < min_units || remaining > max_units) return;
      current[pos] = remaining;
      ++visited;
      const double obj = acc + t[pos] * unit_value[remaining];
      const bool better = maximize ? obj > best_objective : obj < best_objective;
      if (better) {
        best_objective = obj;
        best = current;
      }
      return;
    }
    const std::int64_t tail = static_cast<std::int64_t>(n - pos - 1);
    const std::int64_t lo = std::max(min_units, remaining - tail * max_units);
    const std::int64_t hi = std::min(max_units, remaining - tail * min_units);
    for (std::int64_t v = lo; v <= hi; ++v) {
      current[pos] = v;
      run(pos + 1, remaining - v, acc + t[pos] * unit_value[v]);
    }
  }
};

std::int64_t snap_units(double value, double step) {
  return static_cast<std::int64_t>(std::llround(value / step));
}

}  // namespace

GridSpec GridSpec::validated(double step, double max_points) {
  if (!std::isfinite(step) || !std::isfinite(max_points)) {
    fail(Errc::not_finite, "grid parameters must be finite");
  }
  if (!(step > 0.0 && step <= 1.0)) {
    fail(Errc::out_of_range, "grid step must lie in (0, 1], got " +
                                 std::to_string(step));
  }
  const double units = std::round(1.0 / step);
  if (std::abs(1.0 - step * units) > 1e-12) {
    fail(Errc::out_of_range, "grid step must divide 1, got " + std::to_string(step));
  }
  if (!(max_points > 0.0)) {
    fail(Errc::out_of_range, "max_points must be positive");
  }
  return GridSpec{step, max_points};
}

std::uint64_t composition_count(std::size_t n, std::uint64_t total_units,
                                std::uint64_t max_units) {
  // dp[s] = number of ways to reach sum s with the parts processed so far.
  std::vector<double> dp(total_units + 1, 0.0);
  dp[0] = 1.0;
  for (std::size_t part = 0; part < n; ++part) {
    std::vector<double> next(total_units + 1, 0.0);
    for (std::uint64_t s = 0; s <= total_units; ++s) {
      if (dp[s] == 0.0) continue;
      const std::uint64_t cap = std::min<std::uint64_t>(max_units, total_units - s);
      for (std::uint64_t v = 0; v <= cap; ++v) next[s + v] += dp[s];
    }
    dp.swap(next);
  }
  const double count = dp[total_units];
  if (count > 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(count);
}

OracleResult brute_force(const AllocationProblem& problem, const GridSpec& grid) {
  const GridSpec spec = GridSpec::validated(grid.step, grid.max_points);
  const std::size_t n = problem.n;
  const std::int64_t max_units = snap_units(1.0, spec.step);
  std::int64_t budget_units = snap_units(problem.r, spec.step);
  budget_units = std::clamp<std::int64_t>(budget_units, 0,
                                          max_units * static_cast<std::int64_t>(n));

  OracleResult out;
  out.effective_r = static_cast<double>(budget_units) * spec.step;
  out.snapped = std::abs(out.effective_r - problem.r) > 1e-12;

  const std::uint64_t count =
      composition_count(n, static_cast<std::uint64_t>(budget_units),
                        static_cast<std::uint64_t>(max_units));
  if (static_cast<double>(count) > spec.max_points) {
    fail(Errc::too_large, "oracle would enumerate " + std::to_string(count) +
                              " grid points; shrink n or coarsen the grid");
  }

  std::vector<double> unit_value(max_units + 1);
  for (std::int64_t v = 0; v <= max_units; ++v) {
    unit_value[v] = eval(problem.weighting, static_cast<double>(v) * spec.step);
  }

  Enumerator enumerator(n, 0, max_units, unit_value, problem.priorities.t,
                        problem.sense == Sense::benefit);
  enumerator.run(0, budget_units, 0.0);
  if (enumerator.best.empty() && n > 0) {
    fail(Errc::infeasible, "no grid point meets the budget");
  }

  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = static_cast<double>(enumerator.best[i]) * spec.step;
  }

  SolveResult result;
  result.distribution = Distribution{std::move(p)};
  result.objective = enumerator.best_objective;
  result.method = SolveMethod::oracle;
  const double ell = landmarks(problem.weighting).inflection;
  if (problem.sense == Sense::harm) {
    HarmStructure s;
    double pool_sum = 0.0;
    for (double v : result.distribution.p) {
      if (v >= ell - 1e-12) {
        ++s.k;
        pool_sum += v;
      } else if (v > 0.0) {
        s.delta += v;
      }
    }
    s.common_p = s.k > 0 ? pool_sum / static_cast<double>(s.k) : 0.0;
    result.structure = s;
  } else {
    BenefitStructure s;
    std::vector<double> interior;
    double pool_sum = 0.0;
    std::size_t pool_count = 0;
    for (double v : result.distribution.p) {
      if (v >= 1.0 - 1e-12) {
        ++s.j;
      } else if (v > ell + 1e-12) {
        interior.push_back(v);
      } else {
        pool_sum += v;
        ++pool_count;
      }
    }
    if (interior.size() == 1) s.gamma = interior.front();
    if (pool_count > 0) s.common_p = pool_sum / static_cast<double>(pool_count);
    result.structure = s;
  }

  out.result = std::move(result);
  out.points_evaluated = enumerator.visited;
  return out;
}

LemmaOracleResult lemma_oracle(Region region, OptSense sense, std::size_t m,
                               double budget, const WeightingParams& params,
                               const GridSpec& grid) {
  if (m < 1) fail(Errc::out_of_range, "lemma oracle requires m >= 1");
  const GridSpec spec = GridSpec::validated(grid.step, grid.max_points);
  const double ell = landmarks(params).inflection;
  const std::int64_t full = snap_units(1.0, spec.step);
  const double md = static_cast<double>(m);

  std::int64_t lo_units = 0, hi_units = 0;
  if (region == Region::concave) {
    if (!(budget > 0.0 && budget <= md * ell + 1e-12)) {
      fail(Errc::budget_out_of_range,
           "concave-region budget must lie in (0, m*l], got " + std::to_string(budget));
    }
    lo_units = 0;
    hi_units = static_cast<std::int64_t>(std::floor(ell / spec.step + 1e-9));
  } else {
    if (!(budget >= md * ell - 1e-12 && budget <= md + 1e-12)) {
      fail(Errc::budget_out_of_range,
           "convex-region budget must lie in [m*l, m], got " + std::to_string(budget));
    }
    lo_units = static_cast<std::int64_t>(std::ceil(ell / spec.step - 1e-9));
    hi_units = full;
  }

  const std::int64_t budget_units = snap_units(budget, spec.step);
  if (budget_units < lo_units * static_cast<std::int64_t>(m) ||
      budget_units > hi_units * static_cast<std::int64_t>(m)) {
    fail(Errc::budget_out_of_range,
         "budget has no grid representation inside the region box");
  }

  const std::uint64_t per_coord = static_cast<std::uint64_t>(hi_units - lo_units + 1);
  double rough = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) rough *= static_cast<double>(per_coord);
  if (rough > spec.max_points) {
    fail(Errc::too_large, "lemma oracle grid too large");
  }

  std::vector<double> unit_value(full + 1, 0.0);
  for (std::int64_t v = lo_units; v <= hi_units; ++v) {
    unit_value[v] = eval(params, static_cast<double>(v) * spec.step);
  }
  const std::vector<double> ones(m, 1.0);
  Enumerator enumerator(m, lo_units, hi_units, unit_value, ones,
                        sense == OptSense::maximize);
  enumerator.run(0, budget_units, 0.0);
  if (enumerator.best.empty()) {
    fail(Errc::budget_out_of_range, "no grid point meets the budget in the region box");
  }

  LemmaOracleResult out;
  out.x.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.x[i] = static_cast<double>(enumerator.best[i]) * spec.step;
  }
  out.objective = enumerator.best_objective;
  out.points_evaluated = enumerator.visited;
  return out;
}

}  // namespace pwalloc
