#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fsync/bounds.hpp"
#include "fsync/dist.hpp"
#include "fsync/pattern.hpp"
#include "fsync/sync.hpp"

namespace fisher {

struct TauStarPolicy {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  double value = 0.0;      // Fixed
  double lo = 0.0, hi = 0.0;  // Uniform: fresh draw per trial

  static TauStarPolicy fixed(double v) { return {Kind::Fixed, v, 0.0, 0.0}; }
  static TauStarPolicy uniform(double lo, double hi) {
    return {Kind::Uniform, 0.0, lo, hi};
  }
};

struct ExperimentConfig {
  MeetingPattern pattern;
  std::vector<DistributionSpec> assignment;  // one spec per sensor
  std::optional<DistributionSpec> noise;     // required
  Algorithm algorithm = Algorithm::Alg;
  std::int64_t trials = 2;
  TauStarPolicy tau_star = TauStarPolicy::fixed(0.0);
  std::uint64_t master_seed = 0;
  std::set<int> anchored;
  int workers = 1;
  bool attach_bounds = true;  // compute the FI trajectory and floors
  // When set, every trial's trajectory is streamed here in trial order
  // (forces single-worker execution).
  std::function<void(std::int64_t trial, const TrialTrajectory&)> dump_sink;
};

// All tables are [round][sensor]. accuracy is deterministic (identical in
// every trial); ratio_var_times_j is NaN for the midpoint baseline.
struct ExperimentResult {
  int n = 0;
  int rounds = 0;  // pattern depth + 1
  std::int64_t trials = 0;
  Algorithm algorithm = Algorithm::Alg;
  double delta0_value = 0.0;
  double noise_fi = 0.0;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> variance;
  std::vector<std::vector<double>> accuracy;
  std::vector<std::vector<double>> fi_bound;
  std::vector<std::vector<double>> var_floor;
  std::vector<std::vector<double>> ratio_var_times_j;
};

// Runs config.trials seeded trials (trial k uses derive_seed(master_seed, k))
// and aggregates streaming moments per (sensor, round). Deterministic for a
// fixed config including the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CellViolation {
  int sensor = 0;
  int round = 0;
  double value = 0.0;
  double limit = 0.0;
};

struct CheckReport {
  std::string name;
  bool pass = true;
  std::size_t cells = 0;
  double worst = 0.0;  // most extreme statistic seen (check-specific)
  std::vector<CellViolation> violations;  // capped at 32 entries
  std::string note;
};

// Mean gate: for every cell, |mean - tau_star| <= 4 sqrt(var/trials).
// Passes while the violating fraction stays within max_violation_fraction
// (sampling allows rare 4-sigma excursions).
CheckReport check_unbiasedness(const ExperimentResult& result, double tau_star,
                               double max_violation_fraction = 0.005);

// |variance * accuracy - 1| <= rel_tol per cell; rel_tol defaults to
// 5 sqrt(2/trials), the sampling error of a variance estimate. ALG only.
CheckReport check_accuracy_matches_variance(const ExperimentResult& result,
                                            double rel_tol = 0.0);

struct CompetitivenessReport {
  CheckReport exact;        // c * delta0 >= J, deterministic
  CheckReport per_event;    // accuracy gain >= (1/delta0)/(1/J_b + 1/J_N)
  CheckReport statistical;  // variance <= delta0/J * (1 + rel_tol)
  bool pass() const {
    return exact.pass && per_event.pass && statistical.pass;
  }
};

CompetitivenessReport check_competitiveness(const ExperimentResult& result,
                                            const FisherTrajectory& traj,
                                            double delta0_value,
                                            const MeetingPattern& pattern,
                                            double rel_tol = 0.05);

struct KappaPoint {
  int depth = 0;
  double kappa_hat = 0.0;           // max over sensors of var * J, final round
  double max_final_variance = 0.0;  // max over sensors, final round
};

// Runs each config and reports the final-round worst variance-to-bound ratio
// per depth. Preconditions: Gaussian noise everywhere, strictly increasing
// pattern depths.
std::vector<KappaPoint> kappa_trend(std::span<const ExperimentConfig> configs);

// Spec-surface convenience overload.
double empirical_convergence_time(const ExperimentResult& result,
                                  const MeetingPattern& pattern,
                                  double epsilon);

}  // namespace fisher
