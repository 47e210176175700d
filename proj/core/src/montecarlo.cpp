#include "fsync/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "fsync/errors.hpp"
#include "fsync/stats.hpp"

namespace fisher {

namespace {

constexpr std::size_t kMaxViolationEntries = 32;

void record_violation(CheckReport& report, int sensor, int round, double value,
                      double limit) {
  report.pass = false;
  if (report.violations.size() < kMaxViolationEntries) {
    report.violations.push_back({sensor, round, value, limit});
  }
}

// max Fisher-tightness over the distinct specs in the assignment plus noise
double catalog_delta0(const ExperimentConfig& config) {
  std::vector<DistributionSpec> distinct;
  for (const auto& spec : config.assignment) {
    if (std::find(distinct.begin(), distinct.end(), spec) == distinct.end()) {
      distinct.push_back(spec);
    }
  }
  return delta0(FamilyCatalog{std::move(distinct), *config.noise});
}

struct MomentGrid {
  std::vector<std::vector<RunningMoments>> cells;  // [round][sensor]

  MomentGrid(int rounds, int n)
      : cells(rounds, std::vector<RunningMoments>(n)) {}

  void add(const TrialTrajectory& traj) {
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      for (std::size_t a = 0; a < traj.states[t].size(); ++a) {
        cells[t][a].add(traj.states[t][a].opinion);
      }
    }
  }

  void merge(const MomentGrid& other) {
    for (std::size_t t = 0; t < cells.size(); ++t) {
      for (std::size_t a = 0; a < cells[t].size(); ++a) {
        cells[t][a].merge(other.cells[t][a]);
      }
    }
  }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (!config.noise.has_value()) {
    throw ConfigError("experiment config is missing the noise spec");
  }
  if (config.trials < 2) {
    throw ConfigError("an experiment needs at least two trials");
  }
  const int n = config.pattern.n();
  if (static_cast<int>(config.assignment.size()) != n) {
    throw AssignmentIncomplete("assignment does not cover every sensor");
  }
  for (int a : config.anchored) {
    if (a < 0 || a >= n) {
      throw ConfigError("anchored sensor index out of range");
    }
  }
  {
    const auto report = validate_independence(config.pattern);
    if (!report.valid) {
      throw PatternNotIndependent("experiment pattern is not independent");
    }
  }

  const int rounds = config.pattern.depth() + 1;
  const DistributionSpec& noise = *config.noise;

  auto run_one = [&](std::int64_t k) {
    Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(k)));
    double tau = config.tau_star.value;
    if (config.tau_star.kind == TauStarPolicy::Kind::Uniform) {
      tau = rng.uniform(config.tau_star.lo, config.tau_star.hi);
    }
    TrialTrajectory traj =
        run_trial(config.pattern, config.assignment, noise, tau,
                  config.algorithm, config.anchored, rng,
                  TrialOptions{.validate_pattern = false});
    traj.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(k));
    return traj;
  };

  // Accuracy columns are rng-independent, so trial 0 defines them and every
  // other trial must reproduce them bit for bit.
  std::vector<std::vector<double>> accuracy(rounds, std::vector<double>(n));
  {
    const TrialTrajectory probe = run_one(0);
    for (int t = 0; t < rounds; ++t) {
      for (int a = 0; a < n; ++a) {
        accuracy[t][a] = probe.states[t][a].accuracy;
      }
    }
  }

  const int workers =
      config.dump_sink ? 1 : std::max(1, std::min<int>(config.workers, 64));
  std::vector<MomentGrid> partials(workers, MomentGrid(rounds, n));
  std::atomic<bool> accuracy_mismatch{false};

  auto worker_loop = [&](int w) {
    MomentGrid& grid = partials[w];
    for (std::int64_t k = w; k < config.trials; k += workers) {
      const TrialTrajectory traj = run_one(k);
      for (int t = 0; t < rounds && !accuracy_mismatch.load(); ++t) {
        for (int a = 0; a < n; ++a) {
          if (traj.states[t][a].accuracy != accuracy[t][a]) {
            accuracy_mismatch.store(true);
          }
        }
      }
      grid.add(traj);
      if (config.dump_sink) {
        config.dump_sink(k, traj);
      }
    }
  };

  if (workers == 1) {
    worker_loop(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker_loop, w);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (accuracy_mismatch.load()) {
    throw Error("accuracy columns varied across trials");
  }

  // merge partials in worker order so results do not depend on scheduling
  MomentGrid total = std::move(partials[0]);
  for (int w = 1; w < workers; ++w) {
    total.merge(partials[w]);
  }

  ExperimentResult result;
  result.n = n;
  result.rounds = rounds;
  result.trials = config.trials;
  result.algorithm = config.algorithm;
  result.accuracy = std::move(accuracy);
  result.mean.assign(rounds, std::vector<double>(n));
  result.variance.assign(rounds, std::vector<double>(n));
  for (int t = 0; t < rounds; ++t) {
    for (int a = 0; a < n; ++a) {
      result.mean[t][a] = total.cells[t][a].mean;
      result.variance[t][a] = total.cells[t][a].variance();
    }
  }

  result.delta0_value = catalog_delta0(config);
  result.noise_fi = noise.fisher_information();
  if (config.attach_bounds) {
    std::vector<double> initial_fi(n);
    for (int a = 0; a < n; ++a) {
      initial_fi[a] = config.assignment[a].fisher_information();
    }
    const FisherTrajectory traj =
        fi_recursion(config.pattern, initial_fi, result.noise_fi, false);
    result.fi_bound = traj.values;
    result.var_floor = cramer_rao_floor(traj);
    result.ratio_var_times_j.assign(rounds, std::vector<double>(n));
    const bool is_alg = config.algorithm == Algorithm::Alg;
    for (int t = 0; t < rounds; ++t) {
      for (int a = 0; a < n; ++a) {
        result.ratio_var_times_j[t][a] =
            is_alg ? result.variance[t][a] * result.fi_bound[t][a]
                   : std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return result;
}

CheckReport check_unbiasedness(const ExperimentResult& result, double tau_star,
                               double max_violation_fraction) {
  CheckReport report;
  report.name = "unbiasedness";
  std::size_t violating = 0;
  for (int t = 0; t < result.rounds; ++t) {
    for (int a = 0; a < result.n; ++a) {
      ++report.cells;
      const double spread = std::sqrt(result.variance[t][a] /
                                      static_cast<double>(result.trials));
      const double deviation = std::abs(result.mean[t][a] - tau_star);
      const double limit = 4.0 * spread;
      const double sigmas = spread > 0.0 ? deviation / spread : 0.0;
      report.worst = std::max(report.worst, sigmas);
      if (deviation > limit) {
        ++violating;
        if (report.violations.size() < kMaxViolationEntries) {
          report.violations.push_back({a, t, deviation, limit});
        }
      }
    }
  }
  const double fraction =
      report.cells == 0
          ? 0.0
          : static_cast<double>(violating) / static_cast<double>(report.cells);
  report.pass = fraction <= max_violation_fraction;
  report.note = std::to_string(violating) + " of " +
                std::to_string(report.cells) + " cells beyond 4 sigma";
  return report;
}

CheckReport check_accuracy_matches_variance(const ExperimentResult& result,
                                            double rel_tol) {
  if (result.algorithm != Algorithm::Alg) {
    throw Error("accuracy/variance identity only applies to the ALG rule");
  }
  CheckReport report;
  report.name = "accuracy_matches_variance";
  if (rel_tol <= 0.0) {
    rel_tol = 5.0 * std::sqrt(2.0 / static_cast<double>(result.trials));
  }
  for (int t = 0; t < result.rounds; ++t) {
    for (int a = 0; a < result.n; ++a) {
      ++report.cells;
      const double product =
          result.variance[t][a] * result.accuracy[t][a];
      const double off = std::abs(product - 1.0);
      report.worst = std::max(report.worst, off);
      if (off > rel_tol) {
        record_violation(report, a, t, product, rel_tol);
      }
    }
  }
  report.note = "tolerance " + std::to_string(rel_tol);
  return report;
}

CompetitivenessReport check_competitiveness(const ExperimentResult& result,
                                            const FisherTrajectory& traj,
                                            double delta0_value,
                                            const MeetingPattern& pattern,
                                            double rel_tol) {
  if (traj.rounds() != result.rounds || traj.sensors() != result.n) {
    throw MismatchedShapes("FI trajectory does not match the result table");
  }
  CompetitivenessReport report;
  report.exact.name = "accuracy_dominates_fi";
  report.statistical.name = "competitive_variance";
  report.per_event.name = "per_event_gain";

  constexpr double kSlack = 1e-12;  // fp rounding on an exact identity
  for (int t = 0; t < result.rounds; ++t) {
    for (int a = 0; a < result.n; ++a) {
      const double c = result.accuracy[t][a];
      const double j = traj.values[t][a];
      ++report.exact.cells;
      if (c * delta0_value < j * (1.0 - kSlack)) {
        record_violation(report.exact, a, t, c * delta0_value, j);
      }
      report.exact.worst = std::max(report.exact.worst,
                                    j > 0.0 ? j / (c * delta0_value) : 0.0);

      ++report.statistical.cells;
      const double limit = delta0_value / j * (1.0 + rel_tol);
      const double var = result.variance[t][a];
      report.statistical.worst =
          std::max(report.statistical.worst, var * j / delta0_value);
      if (var > limit) {
        record_violation(report.statistical, a, t, var, limit);
      }
    }
  }

  // per-event gate: each observation's accuracy gain is at least the FI
  // gain bound divided by delta0. Deterministic in the accuracies.
  for (const auto& e : pattern.events()) {
    ++report.per_event.cells;
    const double gain = result.accuracy[e.round + 1][e.observer] -
                        result.accuracy[e.round][e.observer];
    const double j_b = traj.values[e.round][e.observed];
    const double floor = (1.0 / delta0_value) /
                         (1.0 / j_b + 1.0 / traj.noise_fi);
    if (gain < floor * (1.0 - kSlack)) {
      record_violation(report.per_event, e.observer, e.round, gain, floor);
    }
    if (gain > 0.0) {
      report.per_event.worst = std::max(report.per_event.worst, floor / gain);
    }
  }
  return report;
}

std::vector<KappaPoint> kappa_trend(
    std::span<const ExperimentConfig> configs) {
  if (configs.empty()) {
    throw Error("kappa trend needs at least one config");
  }
  std::vector<KappaPoint> points;
  points.reserve(configs.size());
  int previous_depth = -1;
  for (const auto& config : configs) {
    if (!config.noise.has_value() ||
        config.noise->kind() != DistKind::Gaussian) {
      throw Error("kappa trend requires Gaussian noise");
    }
    const int d = config.pattern.depth();
    if (d <= previous_depth) {
      throw Error("kappa trend requires strictly increasing depths");
    }
    previous_depth = d;

    ExperimentConfig with_bounds = config;
    with_bounds.attach_bounds = true;
    const ExperimentResult result = run_experiment(with_bounds);
    KappaPoint point;
    point.depth = d;
    const int final_round = result.rounds - 1;
    for (int a = 0; a < result.n; ++a) {
      point.kappa_hat = std::max(
          point.kappa_hat,
          result.variance[final_round][a] * result.fi_bound[final_round][a]);
      point.max_final_variance =
          std::max(point.max_final_variance, result.variance[final_round][a]);
    }
    points.push_back(point);
  }
  return points;
}

double empirical_convergence_time(const ExperimentResult& result,
                                  const MeetingPattern& pattern,
                                  double epsilon) {
  return empirical_convergence_time(result.variance, pattern, epsilon);
}

}  // namespace fisher
