#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fsync/bounds.hpp"
#include "fsync/dist.hpp"
#include "fsync/errors.hpp"
#include "fsync/pattern.hpp"
#include "fsync/rng.hpp"
#include "fsync/sync.hpp"
#include "helpers.hpp"

using fisher::Algorithm;
using fisher::DistributionSpec;
using fisher::MeetingPattern;
using fisher::Rng;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("single-event recursion step") {
  const auto p = MeetingPattern::make(2, {{0, 0, 1}});
  const std::vector<double> j0{2.0, 2.0};
  const auto traj = fisher::fi_recursion(p, j0, 2.0);
  REQUIRE(traj.rounds() == 2);
  // 2 + 1/(1/2 + 1/2)
  CHECK(traj.values[1][0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(traj.values[1][1] == 2.0);
}

TEST_CASE("noiseless limit is additive") {
  const auto p = MeetingPattern::make(2, {{0, 0, 1}});
  const auto traj = fisher::fi_recursion(p, std::vector<double>{1.5, 2.5}, kInf);
  CHECK(traj.values[1][0] == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("hand-computed tournament values") {
  // fixed labels: 0 obs 1, 2 obs 3 at round 0; 0 obs 2 at round 1
  const auto p = MeetingPattern::make(4, {{0, 0, 1}, {0, 2, 3}, {1, 0, 2}});
  const std::vector<double> j0(4, 1.0);
  const auto traj = fisher::fi_recursion(p, j0, 1.0);
  CHECK(traj.values[1][0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(traj.values[1][2] == doctest::Approx(1.5).epsilon(1e-15));
  // 1.5 + 1/(1/1.5 + 1) = 2.1
  CHECK(traj.values[2][0] == doctest::Approx(2.1).epsilon(1e-12));
}

TEST_CASE("recursion rejects bad inputs") {
  const auto bad = MeetingPattern::make(2, {{0, 0, 1}, {1, 1, 0}});
  CHECK_THROWS_AS(fisher::fi_recursion(bad, std::vector<double>{1.0, 1.0}, 1.0),
                  fisher::PatternNotIndependent);
  const auto good = MeetingPattern::make(2, {{0, 0, 1}});
  CHECK_THROWS_AS(fisher::fi_recursion(good, std::vector<double>{1.0}, 1.0),
                  fisher::MismatchedShapes);
  CHECK_THROWS_AS(
      fisher::fi_recursion(good, std::vector<double>{1.0, -1.0}, 1.0),
      fisher::Error);
}

TEST_CASE("cramer-rao floor is the elementwise reciprocal") {
  const auto p = MeetingPattern::make(2, {{0, 0, 1}});
  const auto traj = fisher::fi_recursion(p, std::vector<double>{4.0, 1.0}, 1.0);
  const auto floors = fisher::cramer_rao_floor(traj);
  CHECK(floors[0][0] == 0.25);
  CHECK(floors[0][1] == 1.0);
  // Gaussian sigma^2 = 1 starts exactly on its floor
  CHECK(floors[0][1] ==
        doctest::Approx(DistributionSpec::gaussian(1.0).variance()));
  // floors never increase along rounds
  for (int a = 0; a < 2; ++a) {
    for (int t = 0; t + 1 < traj.rounds(); ++t) {
      CHECK(floors[t + 1][a] <= floors[t][a]);
    }
  }
}

TEST_CASE("channel capacity bounds every increment") {
  SUBCASE("infinitely informed partner saturates at J_N") {
    const auto p = MeetingPattern::make(2, {{0, 0, 1}});
    const auto traj =
        fisher::fi_recursion(p, std::vector<double>{1.0, kInf}, 4.0);
    CHECK(fisher::check_channel_capacity(traj) == doctest::Approx(4.0));
  }
  SUBCASE("J_b equal to J_N gives half the capacity") {
    const auto p = MeetingPattern::make(2, {{0, 0, 1}});
    const auto traj =
        fisher::fi_recursion(p, std::vector<double>{1.0, 4.0}, 4.0);
    CHECK(fisher::check_channel_capacity(traj) == doctest::Approx(2.0));
  }
  SUBCASE("finite trajectories stay strictly below J_N") {
    Rng rng(21);
    for (int i = 0; i < 30; ++i) {
      const auto p = fisher::gen_random_independent(16, 4, 0.8, rng);
      std::vector<double> j0(16);
      for (auto& j : j0) j = 0.25 + 4.0 * rng.uniform01();
      const double j_n = 0.5 + 4.0 * rng.uniform01();
      const auto traj = fisher::fi_recursion(p, j0, j_n);
      CHECK(fisher::check_channel_capacity(traj) < j_n);
    }
  }
}

TEST_CASE("J values never decrease along rounds") {
  Rng rng(33);
  const auto p = fisher::gen_random_independent(12, 4, 0.9, rng);
  std::vector<double> j0(12, 1.0);
  const auto traj = fisher::fi_recursion(p, j0, 2.0);
  for (int a = 0; a < 12; ++a) {
    for (int t = 0; t + 1 < traj.rounds(); ++t) {
      CHECK(traj.values[t + 1][a] >= traj.values[t][a]);
    }
  }
}

TEST_CASE("all-Gaussian accuracies reproduce the FI recursion") {
  // both follow the same recursion when every tightness is 1
  Rng rng(55);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = fisher::gen_random_independent(10, 4, 0.7, rng);
    std::vector<DistributionSpec> assign;
    std::vector<double> j0;
    for (int a = 0; a < 10; ++a) {
      const double v = 0.25 + 2.0 * rng.uniform01();
      assign.push_back(DistributionSpec::gaussian(v));
      j0.push_back(1.0 / v);
    }
    const double noise_var = 0.2 + rng.uniform01();
    const auto noise = DistributionSpec::gaussian(noise_var);

    Rng trial_rng(1000 + rep);
    const auto traj =
        fisher::run_trial(p, assign, noise, 0.0, Algorithm::Alg, {}, trial_rng);
    const auto fi = fisher::fi_recursion(p, j0, 1.0 / noise_var);
    for (int t = 0; t <= p.depth(); ++t) {
      for (int a = 0; a < 10; ++a) {
        CHECK(testutil::close_rel(traj.states[t][a].accuracy, fi.values[t][a],
                                  1e-12));
      }
    }
  }
}

TEST_CASE("lower median") {
  CHECK(fisher::lower_median({3.0}) == 3.0);
  CHECK(fisher::lower_median({1.0, 9.0}) == 1.0);
  CHECK(fisher::lower_median({9.0, 1.0, 4.0}) == 4.0);
  CHECK(fisher::lower_median({1.0, 2.0, 3.0, 4.0}) == 2.0);
  CHECK_THROWS_AS(fisher::lower_median({}), fisher::Error);
}

TEST_CASE("convergence lower bound arithmetic") {
  const std::vector<double> ones(9, 1.0);
  const auto b = fisher::convergence_lower_bound(0.1, ones, 4.0);
  CHECK(b.j0_median == 1.0);
  CHECK(b.bound == doctest::Approx(24.75).epsilon(1e-12));

  // clamp when the premise fails
  const auto clamped = fisher::convergence_lower_bound(2.0, ones, 4.0);
  CHECK(clamped.bound == 0.0);

  const std::vector<double> mixed{1.0, 4.0, 9.0};
  const auto m = fisher::convergence_lower_bound(0.1, mixed, 1.0);
  CHECK(m.j0_median == 4.0);
  CHECK(m.bound == doctest::Approx(96.0).epsilon(1e-12));
}

TEST_CASE("empirical convergence time") {
  const auto p = MeetingPattern::make(3, {{0, 0, 1}, {1, 0, 2}});

  SUBCASE("epsilon above every initial spread converges at round zero") {
    const std::vector<std::vector<double>> var{
        {1.0, 1.0, 1.0}, {0.6, 1.0, 1.0}, {0.4, 1.0, 1.0}};
    CHECK(fisher::empirical_convergence_time(var, p, 2.0) == 0.0);
  }

  SUBCASE("never converging returns the infinity sentinel") {
    const auto empty = MeetingPattern::make(3, {});
    const std::vector<std::vector<double>> var{{1.0, 1.0, 1.0}};
    CHECK(fisher::empirical_convergence_time(var, empty, 0.5) == kInf);
  }

  SUBCASE("observations are counted before the crossing round") {
    // rho = 2: two of three sensors dip under eps^2 there
    const std::vector<std::vector<double>> var{
        {1.0, 1.0, 1.0}, {0.2, 1.0, 1.0}, {0.1, 0.2, 1.0}};
    // counts before round 2: sensor 0 made 2 observations, others 0
    CHECK(fisher::empirical_convergence_time(var, p, 0.6) == 0.0);
  }

  SUBCASE("strictly more than half is required") {
    // exactly half of four sensors below: not enough
    const auto p4 = MeetingPattern::make(4, {});
    const std::vector<std::vector<double>> var{{0.1, 0.1, 1.0, 1.0}};
    CHECK(fisher::empirical_convergence_time(var, p4, 0.5) == kInf);
  }
}

TEST_CASE("tournament convergence stalls but never beats the bound") {
  // in a binary-merge schedule the observed half never improves, so more
  // than half the population cannot cross a tight threshold: T is infinite
  // and the bound holds vacuously
  Rng gen(2);
  const auto p = fisher::gen_tournament(8, gen);
  const int n = p.n();
  const std::vector<DistributionSpec> assign(n, DistributionSpec::gaussian(1.0));
  const auto noise = DistributionSpec::gaussian(1.0);

  Rng rng(4);
  const auto traj =
      fisher::run_trial(p, assign, noise, 0.0, Algorithm::Alg, {}, rng);
  std::vector<std::vector<double>> var(p.depth() + 1,
                                       std::vector<double>(n, 0.0));
  for (int t = 0; t <= p.depth(); ++t) {
    for (int a = 0; a < n; ++a) {
      var[t][a] = 1.0 / traj.states[t][a].accuracy;
    }
  }
  const double eps = 0.9;
  const std::vector<double> j0(n, 1.0);
  const auto bound = fisher::convergence_lower_bound(eps, j0, 1.0);
  CHECK(bound.bound > 0.0);  // the premise 1/eps^2 > J0 holds
  const double t_emp = fisher::empirical_convergence_time(var, p, eps);
  CHECK(t_emp == kInf);
  CHECK(t_emp >= bound.bound);
}

TEST_CASE("empirical time respects the capacity bound on a live run") {
  // synchronous doubling pattern: every sensor observes every round
  const auto p = fisher::gen_cycle(64);
  const int n = p.n();
  const std::vector<DistributionSpec> assign(n, DistributionSpec::gaussian(1.0));
  const auto noise = DistributionSpec::gaussian(0.25);

  // deterministic accuracies stand in for the variance table (exact for ALG)
  Rng rng(3);
  const auto traj =
      fisher::run_trial(p, assign, noise, 0.0, Algorithm::Alg, {}, rng);
  std::vector<std::vector<double>> var(p.depth() + 1,
                                       std::vector<double>(n, 0.0));
  for (int t = 0; t <= p.depth(); ++t) {
    for (int a = 0; a < n; ++a) {
      var[t][a] = 1.0 / traj.states[t][a].accuracy;
    }
  }

  const double eps = 0.3;
  const std::vector<double> j0(n, 1.0);
  const auto bound = fisher::convergence_lower_bound(eps, j0, 4.0);
  const double t_emp = fisher::empirical_convergence_time(var, p, eps);
  CHECK(std::isfinite(t_emp));
  CHECK(t_emp >= bound.bound);
}
