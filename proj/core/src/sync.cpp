#include "fsync/sync.hpp"

#include <string>

#include "fsync/errors.hpp"

namespace fisher {

SensorState init_state(const DistributionSpec& spec, double tau_star,
                       Rng& rng) {
  return {tau_star + spec.sample(rng), 1.0 / spec.variance()};
}

double measure(double x_a, double x_b, const DistributionSpec& noise_spec,
               Rng& rng) {
  return x_b - x_a + noise_spec.sample(rng);
}

double reduced_accuracy(double c_b, double noise_variance) {
  return c_b / (1.0 + c_b * noise_variance);
}

SensorState observe_update_alg(SensorState state_a, double c_b,
                               double d_tilde, double noise_variance) {
  const double c_hat = reduced_accuracy(c_b, noise_variance);
  state_a.opinion += d_tilde * c_hat / (state_a.accuracy + c_hat);
  state_a.accuracy += c_hat;
  return state_a;
}

SensorState observe_update_midpoint(SensorState state_a, double d_tilde) {
  state_a.opinion += 0.5 * d_tilde;
  return state_a;
}

TrialTrajectory run_trial(const MeetingPattern& pattern,
                          std::span<const DistributionSpec> assignment,
                          const DistributionSpec& noise_spec, double tau_star,
                          Algorithm algorithm, const std::set<int>& anchored,
                          Rng& rng, const TrialOptions& options) {
  const int n = pattern.n();
  if (static_cast<int>(assignment.size()) != n) {
    throw AssignmentIncomplete(
        "assignment covers " + std::to_string(assignment.size()) +
        " sensors, pattern has " + std::to_string(n));
  }
  if (options.validate_pattern) {
    const auto report = validate_independence(pattern);
    if (!report.valid) {
      throw PatternNotIndependent(
          "observation at round " + std::to_string(report.violation.round) +
          " joins sensors with overlapping histories");
    }
  }

  const double noise_variance = noise_spec.variance();
  TrialTrajectory traj;
  traj.tau_star = tau_star;
  traj.states.reserve(pattern.depth() + 1);

  std::vector<SensorState> current(n);
  for (int a = 0; a < n; ++a) {
    current[a] = init_state(assignment[a], tau_star, rng);
  }
  traj.states.push_back(current);

  auto it = pattern.events().begin();
  const auto end = pattern.events().end();
  for (int t = 0; t < pattern.depth(); ++t) {
    std::vector<SensorState> next = current;  // read old, write new
    for (; it != end && it->round == t; ++it) {
      const SensorState& a = current[it->observer];
      const SensorState& b = current[it->observed];
      const double d_tilde = measure(a.opinion, b.opinion, noise_spec, rng);
      if (anchored.contains(it->observer)) {
        continue;  // cues consume the measurement but never move
      }
      next[it->observer] =
          algorithm == Algorithm::Alg
              ? observe_update_alg(a, b.accuracy, d_tilde, noise_variance)
              : observe_update_midpoint(a, d_tilde);
    }
    current = std::move(next);
    traj.states.push_back(current);
  }
  return traj;
}

}  // namespace fisher
