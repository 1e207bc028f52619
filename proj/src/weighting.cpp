#include "pwalloc/weighting.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pwalloc/search.hpp"

namespace pwalloc {

namespace {

// Second difference of w around p with step h; tracks the sign of w''.
double second_difference(const WeightingParams& params, double p, double h) {
  return eval(params, p + h) - 2.0 * eval(params, p) + eval(params, p - h);
}

}  // namespace

WeightingParams validate(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    fail(Errc::not_finite, "weighting parameters must be finite");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(Errc::out_of_range,
         "alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  if (!(beta > 0.0)) {
    fail(Errc::out_of_range, "beta must be positive, got " + std::to_string(beta));
  }
  return WeightingParams{alpha, beta};
}

double eval(const WeightingParams& params, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(Errc::domain_error, "eval requires p in [0,1], got " + std::to_string(p));
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return std::exp(-params.beta * std::pow(-std::log(p), params.alpha));
}

double eval_derivative(const WeightingParams& params, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    fail(Errc::domain_error,
         "eval_derivative requires p in (0,1], got " + std::to_string(p));
  }
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  const double u = -std::log(p);
  const double ua = std::pow(u, params.alpha);
  // w'(p) = alpha*beta * w(p) * u^(alpha-1) / p, with 1/p = e^u folded in.
  return params.alpha * params.beta * std::exp(u - params.beta * ua) * ua / u;
}

WeightingLandmarks landmarks(const WeightingParams& params) {
  WeightingLandmarks lm;

  // Inflection: unique sign change of the second difference, concave to
  // convex. Probe geometrically below 0.5 (the inflection can sit close to
  // zero for elevated curves), then linearly up to 1. The step balances
  // truncation (~h^2) against rounding noise in the difference (~1e-16/h^2);
  // 1e-4 keeps the root within ~5e-9 of the true inflection.
  const double h = 1e-4;
  const double lo_limit = 2.0 * h;
  double prev_p = lo_limit;
  double prev_d = second_difference(params, prev_p, h);
  double bracket_lo = 0.0, bracket_hi = 0.0;
  bool bracketed = prev_d >= 0.0;
  if (bracketed) {
    fail(Errc::convergence_failure,
         "no concave region detected; weighting is outside the inverse-S regime");
  }
  const int geo_probes = 64;
  const int lin_probes = 64;
  for (int i = 1; i <= geo_probes + lin_probes && !bracketed; ++i) {
    double p;
    if (i <= geo_probes) {
      p = lo_limit * std::pow(0.5 / lo_limit, static_cast<double>(i) / geo_probes);
    } else {
      p = 0.5 + (1.0 - 2.0 * h - 0.5) * static_cast<double>(i - geo_probes) / lin_probes;
    }
    const double d = second_difference(params, p, h);
    if (prev_d < 0.0 && d >= 0.0) {
      bracket_lo = prev_p;
      bracket_hi = p;
      bracketed = true;
      break;
    }
    prev_p = p;
    prev_d = d;
  }
  if (!bracketed) {
    fail(Errc::convergence_failure,
         "no convex region detected; weighting is outside the inverse-S regime");
  }
  lm.inflection = search::bisect(
      [&](double p) { return second_difference(params, p, h); }, bracket_lo,
      bracket_hi, 1e-10);

  // Fixed point: w is above the diagonal near 0 and below it near 1.
  lm.fixed_point = search::bisect(
      [&](double p) { return eval(params, p) - p; }, 1e-15, 1.0 - 1e-12, 1e-12);

  // Unit slope: w' decreases from +inf on the concave side and is below 1 at
  // the inflection, so the root is unique in (0, inflection).
  lm.unit_slope = search::bisect(
      [&](double p) { return eval_derivative(params, p) - 1.0; }, 1e-15,
      lm.inflection * (1.0 - 1e-9), 1e-12);

  return lm;
}

}  // namespace pwalloc
