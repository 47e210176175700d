#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>

#include "fsync/errors.hpp"

namespace fisher {

inline constexpr double kQuadRelTol = 1e-6;
inline constexpr int kQuadMaxRefinements = 24;

// Composite trapezoid on [lo, hi] with dyadic refinement. Each refinement
// halves the step, reusing previous evaluations; stops once two successive
// estimates agree to rel_tol (or abs_tol, whichever is looser; abs_tol is
// needed for integrals whose true value is zero). Suitable for smooth
// integrands with fast decaying tails (the only kind this project
// integrates).
template <std::invocable<double> F>
double integrate_adaptive(F&& f, double lo, double hi,
                          double rel_tol = kQuadRelTol,
                          int max_refinements = kQuadMaxRefinements,
                          double abs_tol = 0.0) {
  std::int64_t intervals = 64;
  double h = (hi - lo) / static_cast<double>(intervals);
  double sum = 0.5 * (f(lo) + f(hi));
  for (std::int64_t i = 1; i < intervals; ++i) {
    sum += f(lo + static_cast<double>(i) * h);
  }
  double estimate = sum * h;

  for (int r = 0; r < max_refinements; ++r) {
    // add midpoints of the current intervals
    double mid_sum = 0.0;
    for (std::int64_t i = 0; i < intervals; ++i) {
      mid_sum += f(lo + (static_cast<double>(i) + 0.5) * h);
    }
    intervals *= 2;
    h *= 0.5;
    sum += mid_sum;
    const double refined = sum * h;
    const double gate = std::max(rel_tol * std::abs(refined), abs_tol);
    if (std::abs(refined - estimate) <= gate) {
      return refined;
    }
    estimate = refined;
  }
  throw NonConvergent("quadrature did not stabilize to requested tolerance");
}

}  // namespace fisher
