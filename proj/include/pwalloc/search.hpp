#pragma once

#include <cmath>

#include "pwalloc/errors.hpp"

// One-dimensional scalar search primitives shared by the solvers.
// Everything here is derivative-free and deterministic: bisection for
// root-finding, golden-section for minimization, and a dense-grid scan
// with golden refinement for objectives that are not known to be unimodal.

namespace pwalloc::search {

inline constexpr int kMaxIterations = 200;

// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    fail(Errc::convergence_failure, "bisection bracket does not straddle a root");
  }
  for (int i = 0; i < kMaxIterations && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimization on [lo, hi] down to interval width tol.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol = 1e-10) {
  static const double kGold = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - kGold * (b - a);
  double d = a + kGold * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < kMaxIterations && b - a > tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGold * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGold * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
};

// Dense grid over [lo, hi] followed by golden-section refinement around the
// best grid point. Ties prefer the smaller x, so exact endpoints survive.
template <class F>
ScalarMin grid_golden_min(F&& f, double lo, double hi, int grid_points, double tol = 1e-10) {
  if (hi < lo) fail(Errc::domain_error, "grid_golden_min: empty interval");
  if (hi == lo || grid_points < 2) return {lo, f(lo)};

  int best_i = 0;
  double best_x = lo;
  double best_f = f(lo);
  const double h = (hi - lo) / (grid_points - 1);
  for (int i = 1; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + h * i;
    const double fx = f(x);
    if (fx < best_f) {
      best_i = i;
      best_x = x;
      best_f = fx;
    }
  }
  const double rl = (best_i == 0) ? lo : lo + h * (best_i - 1);
  const double rh = (best_i == grid_points - 1) ? hi : lo + h * (best_i + 1);
  const double gx = golden_min(f, rl, rh, tol);
  const double gf = f(gx);
  if (gf < best_f) return {gx, gf};
  return {best_x, best_f};
}

}  // namespace pwalloc::search
