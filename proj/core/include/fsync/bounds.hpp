#pragma once

#include <span>
#include <vector>

#include "fsync/pattern.hpp"

namespace fisher {

// Per-sensor, per-round upper bound on the Fisher information available to
// any algorithm running on the pattern, evaluated with equality (the
// tightest form of the recursion). values[round][sensor]; J values are
// positive and non-decreasing along rounds.
struct FisherTrajectory {
  double noise_fi = 0.0;  // J_N; +infinity models noiseless observation
  std::vector<std::vector<double>> values;

  int rounds() const { return static_cast<int>(values.size()); }
  int sensors() const {
    return values.empty() ? 0 : static_cast<int>(values.front().size());
  }
};

// J_a(0) = initial_fi[a]; an observation of b at round t adds
// 1 / (1/J_b(t) + 1/J_N) to the observer. Synchronous indexing as in the
// rest of the project: round-t events read round-t values.
// Throws PatternNotIndependent (unless validate = false), MismatchedShapes.
FisherTrajectory fi_recursion(const MeetingPattern& pattern,
                              std::span<const double> initial_fi,
                              double noise_fi, bool validate = true);

// Elementwise reciprocal: the variance floor no unbiased estimator can beat.
std::vector<std::vector<double>> cramer_rao_floor(const FisherTrajectory& traj);

// Largest single-event FI increment found anywhere in the trajectory.
// Always <= noise_fi, and strictly below it for finite J_b.
double check_channel_capacity(const FisherTrajectory& traj);

struct ConvergenceBound {
  double epsilon = 0.0;
  double j0_median = 0.0;  // lower median of the initial FI values
  double bound = 0.0;      // observations; 0 when 1/eps^2 <= J0
};

// T(eps) >= (1/eps^2 - J0) / J_N, clamped at zero.
ConvergenceBound convergence_lower_bound(double epsilon,
                                         std::span<const double> initial_fi,
                                         double noise_fi);

// Empirical convergence time from a variance table (variance[round][sensor]):
// rho is the first round where strictly more than half the population has
// variance < eps^2; the result is the lower median over sensors of the
// number of observations each made in rounds before rho. +infinity when rho
// never happens.
double empirical_convergence_time(
    const std::vector<std::vector<double>>& variance,
    const MeetingPattern& pattern, double epsilon);

// sorted[(n-1)/2]: median with the even-count tie broken low, which keeps
// "more than half are at most the median" literally true
double lower_median(std::vector<double> values);

}  // namespace fisher
