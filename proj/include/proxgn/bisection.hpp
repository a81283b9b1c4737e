#pragma once

#include <algorithm>
#include <cmath>

namespace proxgn {

struct BisectionOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  int max_iterations = 200;
};

struct BisectionResult {
  double root;
  int iterations;
};

/// Locates the sign change of f on (lo, hi). The endpoints are never
/// evaluated: sign_at_lo is the sign of f just inside lo (so callers
/// may use analytic limits where f is singular at an endpoint), and f
/// is assumed to have the opposite sign at hi.
template <class F>
BisectionResult bisect(F&& f, double lo, double hi, int sign_at_lo,
                       const BisectionOptions& opt = {}) {
  int iterations = 0;
  while (iterations < opt.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(opt.abs_tol, opt.rel_tol * std::abs(mid))) break;
    if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
    const double value = f(mid);
    ++iterations;
    if (value == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((value < 0.0) == (sign_at_lo < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return BisectionResult{0.5 * (lo + hi), iterations};
}

}  // namespace proxgn
