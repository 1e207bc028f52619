#include "pwalloc/model.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numeric>
#include <random>

using namespace pwalloc;
using Catch::Approx;

TEST_CASE("normalize_priorities scales to sum n", "[model]") {
  const std::vector<double> uniform{5.0, 5.0, 5.0};
  const PriorityProfile p1 = normalize_priorities(uniform);
  CHECK(p1.t == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(p1.uniform());

  const std::vector<double> skewed{1.0, 3.0};
  const PriorityProfile p2 = normalize_priorities(skewed);
  CHECK(p2.t[0] == Approx(0.5).epsilon(0.0).margin(1e-15));
  CHECK(p2.t[1] == Approx(1.5).epsilon(0.0).margin(1e-15));
  CHECK_FALSE(p2.uniform());

  const std::vector<double> with_zero{1.0, 0.0, 2.0};
  CHECK_THROWS_MATCHES(normalize_priorities(with_zero), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::non_positive_priority;
                       }));
  const std::vector<double> negative{1.0, -0.5};
  CHECK_THROWS_AS(normalize_priorities(negative), Error);
}

TEST_CASE("problem construction validates the budget", "[model]") {
  const WeightingParams params{0.5, 1.0};
  CHECK_NOTHROW(make_problem(3, 3.0, Sense::harm, params));
  CHECK_NOTHROW(make_problem(3, 0.0, Sense::harm, params));
  CHECK_THROWS_MATCHES(make_problem(3, 5.0, Sense::harm, params), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::infeasible;
                       }));
  CHECK_THROWS_AS(make_problem(3, -0.5, Sense::harm, params), Error);
  CHECK_THROWS_AS(make_problem(0, 0.0, Sense::harm, params), Error);
}

TEST_CASE("check_feasible reports slack and bound violations", "[model]") {
  const AllocationProblem problem = make_problem(3, 1.0, Sense::harm, {0.5, 1.0});

  const FeasibilityReport ok = check_feasible(problem, {{0.5, 0.5, 0.0}});
  CHECK(ok.ok);
  CHECK(ok.budget_slack == Approx(0.0).epsilon(0.0).margin(1e-12));

  const FeasibilityReport over = check_feasible(problem, {{0.6, 0.6, 0.0}});
  CHECK_FALSE(over.ok);
  CHECK(over.budget_ok == false);
  CHECK(over.budget_slack == Approx(0.2).epsilon(0.0).margin(1e-12));
  CHECK(over.bound_violations.empty());

  const FeasibilityReport bounds = check_feasible(problem, {{1.2, -0.2, 0.0}});
  CHECK_FALSE(bounds.ok);
  REQUIRE(bounds.bound_violations.size() == 2);
  CHECK(bounds.bound_violations[0].index == 0);
  CHECK(bounds.bound_violations[1].index == 1);
  CHECK(bounds.budget_ok);  // 1.2 - 0.2 + 0 still sums to 1

  const FeasibilityReport size = check_feasible(problem, {{0.5, 0.5}});
  CHECK_FALSE(size.ok);
  CHECK_FALSE(size.size_ok);
}

TEST_CASE("perceived_welfare evaluates the weighted sum", "[model]") {
  const WeightingParams params{0.5, 1.0};
  const AllocationProblem problem = make_problem(4, 1.0, Sense::harm, params);

  CHECK(perceived_welfare(problem, {{1.0, 0.0, 0.0, 0.0}}) == Approx(1.0).epsilon(0.0).margin(1e-15));

  // 2 * exp(-sqrt(ln 2)), computed directly from the weighting formula.
  const double direct = 2.0 * std::exp(-std::sqrt(std::log(2.0)));
  CHECK(perceived_welfare(problem, {{0.5, 0.5, 0.0, 0.0}}) ==
        Approx(direct).epsilon(0.0).margin(1e-15));
  CHECK(direct == Approx(0.86987354315142).epsilon(0.0).margin(1e-12));

  CHECK_THROWS_MATCHES(perceived_welfare(problem, {{0.9, 0.9, 0.0, 0.0}}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::infeasible_distribution;
                       }));
}

TEST_CASE("uniform distribution collapses to n*w(r/n) for any priorities",
          "[model]") {
  const WeightingParams params{0.7, 1.0};
  const std::vector<double> raw{2.0, 0.5, 0.5, 1.0};
  const AllocationProblem problem = make_problem(4, 2.0, Sense::harm, params, raw);
  const Distribution uniform{{0.5, 0.5, 0.5, 0.5}};
  CHECK(perceived_welfare(problem, uniform) ==
        Approx(4.0 * eval(params, 0.5)).epsilon(0.0).margin(1e-12));
}

TEST_CASE("permutation equivariance of the welfare score", "[model]") {
  const WeightingParams params{0.5, 1.0};
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> t(5), p(5);
    double sum = 0.0;
    for (auto& v : t) v = unit(rng);
    for (auto& v : p) {
      v = unit(rng) * 0.2;
      sum += v;
    }
    const AllocationProblem problem = make_problem(5, sum, Sense::harm, params, t);
    const double base = perceived_welfare(problem, {p});

    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> t2(5), p2(5);
    for (std::size_t i = 0; i < 5; ++i) {
      t2[i] = problem.priorities.t[perm[i]];
      p2[i] = p[perm[i]];
    }
    AllocationProblem shuffled = problem;
    shuffled.priorities.t = t2;
    CHECK(perceived_welfare(shuffled, {p2}) == Approx(base).epsilon(0.0).margin(1e-12));
  }
}

TEST_CASE("homogeneous reduction: all-ones priorities give plain sums", "[model]") {
  const WeightingParams params{0.5, 1.0};
  const AllocationProblem problem = make_problem(3, 1.0, Sense::harm, params);
  const Distribution dist{{0.2, 0.3, 0.5}};
  const double expected =
      eval(params, 0.2) + eval(params, 0.3) + eval(params, 0.5);
  CHECK(perceived_welfare(problem, dist) == Approx(expected).epsilon(0.0).margin(1e-15));
}

TEST_CASE("degenerate budgets admit exactly one distribution", "[model]") {
  const WeightingParams params{0.5, 1.0};

  const AllocationProblem zero = make_problem(3, 0.0, Sense::harm, params);
  CHECK(check_feasible(zero, {{0.0, 0.0, 0.0}}).ok);
  CHECK_FALSE(check_feasible(zero, {{0.1, -0.1, 0.0}}).ok);
  CHECK_FALSE(check_feasible(zero, {{0.1, 0.0, 0.0}}).ok);

  const AllocationProblem full = make_problem(3, 3.0, Sense::benefit, params);
  CHECK(check_feasible(full, {{1.0, 1.0, 1.0}}).ok);
  CHECK_FALSE(check_feasible(full, {{1.0, 1.0, 0.9}}).ok);
}
