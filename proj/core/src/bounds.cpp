#include "fsync/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fsync/errors.hpp"

namespace fisher {

FisherTrajectory fi_recursion(const MeetingPattern& pattern,
                              std::span<const double> initial_fi,
                              double noise_fi, bool validate) {
  const int n = pattern.n();
  if (static_cast<int>(initial_fi.size()) != n) {
    throw MismatchedShapes("initial FI vector does not match sensor count");
  }
  for (double j : initial_fi) {
    if (!(j > 0.0)) {
      throw Error("initial Fisher information must be positive");
    }
  }
  if (validate) {
    const auto report = validate_independence(pattern);
    if (!report.valid) {
      throw PatternNotIndependent(
          "FI recursion requires an independent pattern (violation at round " +
          std::to_string(report.violation.round) + ")");
    }
  }

  FisherTrajectory traj;
  traj.noise_fi = noise_fi;
  std::vector<double> current(initial_fi.begin(), initial_fi.end());
  traj.values.push_back(current);

  auto it = pattern.events().begin();
  const auto end = pattern.events().end();
  for (int t = 0; t < pattern.depth(); ++t) {
    std::vector<double> next = current;
    for (; it != end && it->round == t; ++it) {
      // 1/(1/J_b + 1/J_N); an infinite noise_fi degenerates to additivity
      const double j_b = current[it->observed];
      next[it->observer] += 1.0 / (1.0 / j_b + 1.0 / noise_fi);
    }
    current = std::move(next);
    traj.values.push_back(current);
  }
  return traj;
}

std::vector<std::vector<double>> cramer_rao_floor(
    const FisherTrajectory& traj) {
  std::vector<std::vector<double>> floors(traj.values.size());
  for (std::size_t t = 0; t < traj.values.size(); ++t) {
    floors[t].reserve(traj.values[t].size());
    for (double j : traj.values[t]) {
      floors[t].push_back(1.0 / j);
    }
  }
  return floors;
}

double check_channel_capacity(const FisherTrajectory& traj) {
  double max_increment = 0.0;
  for (std::size_t t = 0; t + 1 < traj.values.size(); ++t) {
    for (std::size_t a = 0; a < traj.values[t].size(); ++a) {
      max_increment =
          std::max(max_increment, traj.values[t + 1][a] - traj.values[t][a]);
    }
  }
  return max_increment;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) {
    throw Error("median of an empty list");
  }
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

ConvergenceBound convergence_lower_bound(double epsilon,
                                         std::span<const double> initial_fi,
                                         double noise_fi) {
  if (!(epsilon > 0.0)) {
    throw Error("epsilon must be positive");
  }
  ConvergenceBound result;
  result.epsilon = epsilon;
  result.j0_median =
      lower_median(std::vector<double>(initial_fi.begin(), initial_fi.end()));
  const double target_fi = 1.0 / (epsilon * epsilon);
  result.bound = target_fi > result.j0_median
                     ? (target_fi - result.j0_median) / noise_fi
                     : 0.0;
  return result;
}

double empirical_convergence_time(
    const std::vector<std::vector<double>>& variance,
    const MeetingPattern& pattern, double epsilon) {
  const int n = pattern.n();
  const int rounds = static_cast<int>(variance.size());
  if (rounds < pattern.depth() + 1) {
    throw MismatchedShapes("variance table does not cover every round");
  }
  const double eps_sq = epsilon * epsilon;

  int rho = -1;
  for (int t = 0; t < rounds; ++t) {
    if (static_cast<int>(variance[t].size()) != n) {
      throw MismatchedShapes("variance row does not match sensor count");
    }
    int below = 0;
    for (double v : variance[t]) {
      if (v < eps_sq) ++below;
    }
    if (2 * below > n) {
      rho = t;
      break;
    }
  }
  if (rho < 0) {
    return std::numeric_limits<double>::infinity();
  }

  std::vector<double> observations(n, 0.0);
  for (const auto& e : pattern.events()) {
    if (e.round < rho) {
      observations[e.observer] += 1.0;
    }
  }
  return lower_median(std::move(observations));
}

}  // namespace fisher
