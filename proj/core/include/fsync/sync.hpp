#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "fsync/dist.hpp"
#include "fsync/pattern.hpp"
#include "fsync/rng.hpp"

namespace fisher {

enum class Algorithm { Alg, Midpoint };

// The entire per-sensor memory of the weighted-average algorithm: the
// current estimate of the global start time and its accuracy (reciprocal
// variance).
struct SensorState {
  double opinion = 0.0;
  double accuracy = 0.0;
};

// opinion = tau_star + a draw from spec; accuracy = 1 / variance(spec)
SensorState init_state(const DistributionSpec& spec, double tau_star,
                       Rng& rng);

// Noisy relative deviation reading: x_b - x_a + eta.
double measure(double x_a, double x_b, const DistributionSpec& noise_spec,
               Rng& rng);

// Discounts the observed sensor's accuracy for measurement noise:
// c_b / (1 + c_b * var(N)). Monotone in c_b, capped at 1/var(N).
double reduced_accuracy(double c_b, double noise_variance);

// One weighted-average observation step:
//   x' = x + d_tilde * c_hat / (c_a + c_hat),  c' = c_a + c_hat
// with c_hat the reduced accuracy of the observed sensor.
SensorState observe_update_alg(SensorState state_a, double c_b,
                               double d_tilde, double noise_variance);

// Unweighted baseline: move halfway toward the noisy reading. The accuracy
// field is carried along unchanged; it has no meaning for this rule.
SensorState observe_update_midpoint(SensorState state_a, double d_tilde);

struct TrialTrajectory {
  double tau_star = 0.0;
  std::uint64_t seed = 0;
  // states[round][sensor], rounds 0 .. pattern depth
  std::vector<std::vector<SensorState>> states;
};

struct TrialOptions {
  bool validate_pattern = true;  // reject non-independent patterns
};

// Executes one trial over the pattern with synchronous rounds: every
// observation in round t reads round-t states and the updates land in round
// t+1. Anchored sensors (environmental cues) are initialized normally but
// never update; their accuracy still counts when observed.
// Throws AssignmentIncomplete, PatternNotIndependent.
TrialTrajectory run_trial(const MeetingPattern& pattern,
                          std::span<const DistributionSpec> assignment,
                          const DistributionSpec& noise_spec, double tau_star,
                          Algorithm algorithm, const std::set<int>& anchored,
                          Rng& rng, const TrialOptions& options = {});

}  // namespace fisher
