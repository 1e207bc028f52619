#pragma once

#include "pwalloc/errors.hpp"

// Prelec probability weighting: w(p) = exp(-beta * (-ln p)^alpha) with
// curvature alpha in (0,1) and elevation beta > 0. The curve is inverse-S:
// concave up to an inflection point and convex beyond it, crosses the
// diagonal once from above, and has unbounded slope at both endpoints.
//
// The solvers depend on a weighting family only through the triple
// eval / eval_derivative / landmarks. Another inverse-S family
// (Tversky-Kahneman, Gonzalez-Wu) would slot in by providing that triple for
// its own parameter record; nothing downstream assumes the Prelec form.

namespace pwalloc {

struct WeightingParams {
  double alpha = 0.5;
  double beta = 1.0;
};

// Characteristic points of a weighting curve, all in (0,1):
//   unit_slope < inflection, and w'(unit_slope) = 1 on the concave side;
//   fixed_point solves w(p) = p. For beta = 1 the inflection and the fixed
//   point coincide at 1/e for every alpha.
struct WeightingLandmarks {
  double inflection = 0.0;
  double fixed_point = 0.0;
  double unit_slope = 0.0;
};

// Gate for the parameter domain: alpha in (0,1) open, beta > 0, both finite.
WeightingParams validate(double alpha, double beta);

// w(p) for p in [0,1]. w(0) is 0 by continuous limit and w(1) is exactly 1.
double eval(const WeightingParams& params, double p);

// w'(p) for p in (0,1]. The slope diverges at both endpoints; at p = 1 the
// returned value is +infinity, which keeps inversion on the convex side
// well-posed. p <= 0 is rejected (use the unit_slope landmark instead).
double eval_derivative(const WeightingParams& params, double p);

// Landmarks found by bisection: the inflection from the sign change of
// second differences (step 1e-5), the fixed point from w(p) - p, and the
// unit-slope point from w'(p) - 1 on (0, inflection).
WeightingLandmarks landmarks(const WeightingParams& params);

}  // namespace pwalloc
