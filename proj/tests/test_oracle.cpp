#include "pwalloc/oracle.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

using namespace pwalloc;
using Catch::Approx;

namespace {

// Stars-and-bars with an upper bound per part, by inclusion-exclusion.
std::uint64_t bounded_compositions(std::size_t n, std::uint64_t total,
                                   std::uint64_t cap) {
  auto choose = [](std::uint64_t a, std::uint64_t b) -> double {
    if (b > a) return 0.0;
    double result = 1.0;
    for (std::uint64_t i = 0; i < b; ++i) {
      result *= static_cast<double>(a - i) / static_cast<double>(i + 1);
    }
    return result;
  };
  double count = 0.0;
  double sign = 1.0;
  for (std::uint64_t j = 0; j <= n; ++j) {
    const double reach = static_cast<double>(total) - j * (cap + 1.0);
    if (reach < 0.0) break;
    count += sign * choose(n, j) *
             choose(static_cast<std::uint64_t>(reach) + n - 1, n - 1);
    sign = -sign;
  }
  return static_cast<std::uint64_t>(std::llround(count));
}

}  // namespace

TEST_CASE("grid spec validation", "[oracle]") {
  CHECK_NOTHROW(GridSpec::validated(0.02));
  CHECK_NOTHROW(GridSpec::validated(0.1));
  CHECK_NOTHROW(GridSpec::validated(0.5));
  CHECK_THROWS_AS(GridSpec::validated(0.03), Error);   // does not divide 1
  CHECK_THROWS_AS(GridSpec::validated(0.15), Error);   // does not divide 1
  CHECK_THROWS_AS(GridSpec::validated(1.5), Error);
  CHECK_THROWS_AS(GridSpec::validated(0.0), Error);
  CHECK_THROWS_AS(GridSpec::validated(-0.02), Error);
}

TEST_CASE("two-person coin flip beats the certain victim", "[oracle]") {
  const AllocationProblem problem = make_problem(2, 1.0, Sense::harm, {0.5, 1.0});
  const OracleResult oracle = brute_force(problem, GridSpec{0.5, 2e7});
  // Three candidates: (0,1), (0.5,0.5), (1,0); the even split wins.
  CHECK(oracle.result.distribution.p == std::vector<double>{0.5, 0.5});
  CHECK(oracle.result.objective ==
        Approx(2.0 * eval(problem.weighting, 0.5)).epsilon(0.0).margin(1e-12));
  CHECK(oracle.points_evaluated == 3);
  CHECK_FALSE(oracle.snapped);
  CHECK(oracle.result.method == SolveMethod::oracle);
}

TEST_CASE("single individual gets the whole budget", "[oracle]") {
  const AllocationProblem problem = make_problem(1, 0.6, Sense::harm, {0.5, 1.0});
  const OracleResult oracle = brute_force(problem, GridSpec{0.02, 2e7});
  CHECK(oracle.result.distribution.p == std::vector<double>{0.6});
}

TEST_CASE("benefit oracle matches the budget-1 shape family", "[oracle]") {
  const AllocationProblem problem =
      make_problem(4, 1.0, Sense::benefit, {0.5, 1.0});
  const OracleResult oracle = brute_force(problem, GridSpec{0.02, 2e7});
  std::vector<double> p = oracle.result.distribution.p;
  std::sort(p.begin(), p.end());
  // Uniform or (eps,..,eps,1-(n-1)eps), up to one grid step.
  const double eps = p.front();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    CHECK(std::abs(p[i] - eps) <= 0.02 + 1e-12);
  }
  const double top_expected = 1.0 - 3.0 * eps;
  const bool uniform = std::abs(p.back() - eps) <= 0.02 + 1e-12;
  const bool epsilon_form = std::abs(p.back() - top_expected) <= 0.02 + 1e-12;
  CHECK((uniform || epsilon_form));
}

TEST_CASE("exactness on its own grid by independent re-scan", "[oracle]") {
  const AllocationProblem problem = make_problem(3, 1.0, Sense::harm, {0.7, 1.0});
  const GridSpec grid{0.1, 2e7};
  const OracleResult oracle = brute_force(problem, grid);

  double best = 1e18;
  std::uint64_t visited = 0;
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; b <= 10; ++b) {
      const int c = 10 - a - b;
      if (c < 0 || c > 10) continue;
      ++visited;
      const double obj = eval(problem.weighting, a * 0.1) +
                         eval(problem.weighting, b * 0.1) +
                         eval(problem.weighting, c * 0.1);
      best = std::min(best, obj);
    }
  }
  CHECK(oracle.result.objective == Approx(best).epsilon(0.0).margin(1e-12));
  CHECK(oracle.points_evaluated == visited);
}

TEST_CASE("composition counts match the combinatorial formula", "[oracle]") {
  for (std::size_t n : {1u, 2u, 3u}) {
    for (std::uint64_t total : {0u, 5u, 10u, 50u, 75u}) {
      const std::uint64_t cap = 50;
      if (total > cap * n) continue;
      CAPTURE(n, total);
      CHECK(composition_count(n, total, cap) == bounded_compositions(n, total, cap));
    }
  }
}

TEST_CASE("enumeration counter agrees with the count formula", "[oracle]") {
  const AllocationProblem problem = make_problem(3, 1.0, Sense::harm, {0.5, 1.0});
  const GridSpec grid{0.05, 2e7};
  const OracleResult oracle = brute_force(problem, grid);
  CHECK(oracle.points_evaluated == composition_count(3, 20, 20));
}

TEST_CASE("grid refinement never worsens the optimum", "[oracle]") {
  const AllocationProblem harm = make_problem(3, 1.2, Sense::harm, {0.6, 1.0});
  const double coarse_min = brute_force(harm, GridSpec{0.1, 2e7}).result.objective;
  const double fine_min = brute_force(harm, GridSpec{0.05, 2e7}).result.objective;
  CHECK(fine_min <= coarse_min + 1e-12);

  const AllocationProblem benefit = make_problem(3, 1.2, Sense::benefit, {0.6, 1.0});
  const double coarse_max = brute_force(benefit, GridSpec{0.1, 2e7}).result.objective;
  const double fine_max = brute_force(benefit, GridSpec{0.05, 2e7}).result.objective;
  CHECK(fine_max >= coarse_max - 1e-12);
}

TEST_CASE("budget snapping is reported", "[oracle]") {
  const AllocationProblem problem = make_problem(3, 0.499, Sense::harm, {0.5, 1.0});
  const OracleResult oracle = brute_force(problem, GridSpec{0.02, 2e7});
  CHECK(oracle.snapped);
  CHECK(oracle.effective_r == Approx(0.5).epsilon(0.0).margin(1e-12));
  double sum = 0.0;
  for (double v : oracle.result.distribution.p) sum += v;
  CHECK(sum == Approx(0.5).epsilon(0.0).margin(1e-12));
}

TEST_CASE("oversized enumerations are rejected", "[oracle]") {
  const AllocationProblem problem = make_problem(8, 4.0, Sense::harm, {0.5, 1.0});
  CHECK_THROWS_MATCHES(brute_force(problem, GridSpec{0.02, 2e7}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::too_large;
                       }));
}

TEST_CASE("lemma oracle: equal split in the convex region", "[oracle]") {
  const LemmaOracleResult min2 = lemma_oracle(
      Region::convex, OptSense::minimize, 2, 1.2, {0.5, 1.0}, GridSpec{0.01, 2e7});
  CHECK(min2.x == std::vector<double>{0.6, 0.6});

  // Lemma property at m=3: the even split is the grid minimum.
  const LemmaOracleResult min3 = lemma_oracle(
      Region::convex, OptSense::minimize, 3, 1.8, {0.9, 1.0}, GridSpec{0.01, 2e7});
  for (double x : min3.x) CHECK(x == Approx(0.6).epsilon(0.0).margin(1e-12));
}

TEST_CASE("lemma oracle: equal split maximizes in the concave region", "[oracle]") {
  const LemmaOracleResult max3 = lemma_oracle(
      Region::concave, OptSense::maximize, 3, 0.9, {0.5, 1.0}, GridSpec{0.01, 2e7});
  for (double x : max3.x) CHECK(x == Approx(0.3).epsilon(0.0).margin(1e-12));
}

TEST_CASE("lemma oracle: concave minimum pushes to the boundary", "[oracle]") {
  const LemmaOracleResult min2 = lemma_oracle(
      Region::concave, OptSense::minimize, 2, 0.3, {0.5, 1.0}, GridSpec{0.01, 2e7});
  std::vector<double> x = min2.x;
  std::sort(x.begin(), x.end());
  CHECK(x[0] == Approx(0.0).epsilon(0.0).margin(1e-12));
  CHECK(x[1] == Approx(0.3).epsilon(0.0).margin(1e-12));
}

TEST_CASE("lemma claims hold at randomly sampled weighting params", "[oracle]") {
  std::mt19937 rng(31415);
  auto unit = [&rng] { return rng() * (1.0 / 4294967296.0); };
  const GridSpec grid{0.02, 2e7};
  for (int trial = 0; trial < 5; ++trial) {
    const WeightingParams params{0.3 + 0.6 * unit(), 0.6 + 0.6 * unit()};
    const double ell = landmarks(params).inflection;
    for (std::size_t m : {2u, 3u}) {
      const double md = static_cast<double>(m);
      CAPTURE(params.alpha, params.beta, m);

      // Concave minimum: at most one strictly interior coordinate.
      const double c_lo = std::round(0.6 * md * ell / 0.02) * 0.02;
      if (c_lo > 0.0 && c_lo <= md * ell) {
        const auto out = lemma_oracle(Region::concave, OptSense::minimize, m,
                                      c_lo, params, grid);
        std::size_t interior = 0;
        for (double x : out.x) {
          if (x > 0.01 && x < ell - 0.02) ++interior;
        }
        CHECK(interior <= 1);
      }

      // Convex minimum: the equal split (within one grid step).
      const double c_hi = std::round(0.5 * (md * ell + md) / 0.02) * 0.02;
      if (c_hi >= md * ell && c_hi <= md) {
        const auto out = lemma_oracle(Region::convex, OptSense::minimize, m,
                                      c_hi, params, grid);
        const auto [lo, hi] = std::minmax_element(out.x.begin(), out.x.end());
        CHECK(*hi - *lo <= 0.02 + 1e-12);
      }
    }
  }
}

TEST_CASE("lemma oracle rejects budgets outside the region", "[oracle]") {
  const GridSpec grid{0.01, 2e7};
  CHECK_THROWS_MATCHES(
      lemma_oracle(Region::concave, OptSense::minimize, 2, 1.5, {0.5, 1.0}, grid),
      Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == Errc::budget_out_of_range;
      }));
  CHECK_THROWS_AS(
      lemma_oracle(Region::convex, OptSense::minimize, 2, 0.3, {0.5, 1.0}, grid),
      Error);
}
