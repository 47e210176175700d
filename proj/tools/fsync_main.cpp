// fsync: pattern tooling, Fisher-information bounds, Monte Carlo experiment
// runner and pass/fail reporting for weighted-average clock synchronization
// on independent meeting patterns.
//
// Exit codes: 0 success/pass, 1 gate failure, 2 usage or config error,
// 3 model violation (pattern not independent).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fsync/bounds.hpp"
#include "fsync/config.hpp"
#include "fsync/csv.hpp"
#include "fsync/dist.hpp"
#include "fsync/errors.hpp"
#include "fsync/fisherineq.hpp"
#include "fsync/montecarlo.hpp"
#include "fsync/pattern.hpp"
#include "fsync/rng.hpp"
#include "fsync/sync.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitGateFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotIndependent = 3;

std::uint64_t seed_or_env(std::optional<std::uint64_t> flag_seed) {
  fisher::RunConfig probe;
  probe.seed = flag_seed;
  return fisher::resolve_seed(probe);
}

// ---------------------------------------------------------------- pattern --
int cmd_pattern_gen(const std::string& kind, int n, int rounds, double density,
                    std::optional<std::uint64_t> seed,
                    const std::string& out_path) {
  fisher::MeetingPattern pattern;
  if (kind == "tournament") {
    fisher::Rng rng(seed_or_env(seed));
    pattern = fisher::gen_tournament(n, rng);
  } else if (kind == "random") {
    fisher::Rng rng(seed_or_env(seed));
    pattern = fisher::gen_random_independent(n, rounds, density, rng);
  } else if (kind == "cycle") {
    pattern = fisher::gen_cycle(n);  // deterministic, no seed involved
  } else {
    throw fisher::ConfigError("--kind must be tournament, random or cycle");
  }
  fisher::save_pattern(pattern, out_path);
  std::cout << "wrote " << out_path << " (n=" << pattern.n()
            << ", events=" << pattern.events().size()
            << ", depth=" << pattern.depth() << ")\n";
  return kExitPass;
}

int cmd_pattern_validate(const std::string& path) {
  const auto pattern = fisher::load_pattern(path);
  const auto report = fisher::validate_independence(pattern);
  if (report.valid) {
    std::cout << "valid independent pattern (n=" << pattern.n()
              << ", events=" << pattern.events().size()
              << ", depth=" << pattern.depth() << ")\n";
    return kExitPass;
  }
  std::cout << "NOT independent: round " << report.violation.round
            << " event " << report.violation.observer << " -> "
            << report.violation.observed << " shares {";
  bool first = true;
  for (int s : report.shared) {
    std::cout << (first ? "" : ", ") << s;
    first = false;
  }
  std::cout << "}\n";
  return kExitGateFail;
}

// ----------------------------------------------------------------- bounds --
struct LoadedRun {
  fisher::RunConfig config;
  fisher::MeetingPattern pattern;
  std::vector<fisher::DistributionSpec> assignment;
  std::vector<double> initial_fi;
  double noise_fi = 0.0;
  double delta0_value = 0.0;
};

LoadedRun load_run(const std::string& config_path,
                   const std::string& pattern_override) {
  LoadedRun run;
  run.config = fisher::load_run_config(config_path);
  const std::filesystem::path ppath = pattern_override.empty()
                                          ? run.config.pattern_path
                                          : std::filesystem::path(pattern_override);
  run.pattern = fisher::load_pattern(ppath);
  run.assignment = fisher::build_assignment(run.config, run.pattern.n());
  run.initial_fi.reserve(run.pattern.n());
  for (const auto& spec : run.assignment) {
    run.initial_fi.push_back(spec.fisher_information());
  }
  run.noise_fi = run.config.noise->fisher_information();
  run.delta0_value = fisher::delta0(
      fisher::FamilyCatalog{run.config.catalog_initial, *run.config.noise});
  return run;
}

int cmd_bounds(const std::string& config_path,
               const std::string& pattern_override,
               const std::string& out_path) {
  const LoadedRun run = load_run(config_path, pattern_override);
  const auto traj =
      fisher::fi_recursion(run.pattern, run.initial_fi, run.noise_fi);
  fisher::write_bounds_csv(traj, out_path);
  std::cout << "wrote " << out_path << " (J_N=" << fisher::format_double(run.noise_fi)
            << ", max per-event gain="
            << fisher::format_double(fisher::check_channel_capacity(traj)) << ")\n";
  return kExitPass;
}

// -------------------------------------------------------------------- run --
int cmd_run(const std::string& config_path, std::string out_path, int workers,
            const std::string& dump_path, const std::string& algorithm_override) {
  const LoadedRun run = load_run(config_path, "");

  fisher::ExperimentConfig experiment;
  experiment.pattern = run.pattern;
  experiment.assignment = run.assignment;
  experiment.noise = run.config.noise;
  experiment.algorithm = run.config.algorithm;
  if (!algorithm_override.empty()) {
    if (algorithm_override == "alg") {
      experiment.algorithm = fisher::Algorithm::Alg;
    } else if (algorithm_override == "midpoint") {
      experiment.algorithm = fisher::Algorithm::Midpoint;
    } else {
      throw fisher::ConfigError("--algorithm must be alg or midpoint");
    }
  }
  experiment.trials = run.config.trials;
  experiment.tau_star = run.config.tau_star;
  experiment.master_seed = fisher::resolve_seed(run.config);
  experiment.anchored = run.config.anchored;
  experiment.workers = workers;

  std::ofstream dump;
  if (!dump_path.empty()) {
    dump.open(dump_path, std::ios::binary);
    if (!dump) {
      throw fisher::ConfigError("cannot open dump file: " + dump_path);
    }
    fisher::write_trial_dump_header(dump);
    experiment.dump_sink = [&dump](std::int64_t trial,
                                   const fisher::TrialTrajectory& traj) {
      fisher::write_trial_dump_rows(dump, trial, traj);
    };
  }

  const auto result = fisher::run_experiment(experiment);
  if (out_path.empty()) {
    out_path = run.config.output.value_or("result.csv");
  }
  fisher::write_result_csv(result, out_path);
  std::cout << "wrote " << out_path << " (trials=" << result.trials
            << ", delta0=" << fisher::format_double(result.delta0_value) << ")\n";
  return kExitPass;
}

// ----------------------------------------------------------------- report --
int cmd_report(const std::string& result_path, const std::string& bounds_path,
               const std::string& config_path, double epsilon,
               const std::string& json_path) {
  const LoadedRun run = load_run(config_path, "");
  fisher::ExperimentResult result = fisher::read_result_csv(result_path);
  fisher::FisherTrajectory traj = fisher::read_bounds_csv(bounds_path);
  traj.noise_fi = run.noise_fi;
  result.trials = run.config.trials;
  result.algorithm = run.config.algorithm;

  if (result.n != run.pattern.n() || result.rounds != run.pattern.depth() + 1 ||
      traj.sensors() != result.n || traj.rounds() != result.rounds) {
    throw fisher::MismatchedShapes(
        "result/bounds tables do not match the configured pattern");
  }

  std::vector<fisher::CheckReport> checks;

  if (run.config.tau_star.kind == fisher::TauStarPolicy::Kind::Fixed) {
    checks.push_back(
        fisher::check_unbiasedness(result, run.config.tau_star.value));
    checks.back().name = "unbiasedness";
  }
  if (run.config.algorithm == fisher::Algorithm::Alg) {
    checks.push_back(fisher::check_accuracy_matches_variance(result));
    checks.back().name = "accuracy_is_reciprocal_variance";

    auto comp = fisher::check_competitiveness(result, traj, run.delta0_value,
                                              run.pattern);
    comp.exact.name = "accuracy_dominates_fi_bound";
    comp.per_event.name = "per_event_accuracy_gain";
    comp.statistical.name = "competitive_variance";
    checks.push_back(comp.exact);
    checks.push_back(comp.per_event);
    checks.push_back(comp.statistical);
  }

  if (epsilon > 0.0) {
    const auto bound =
        fisher::convergence_lower_bound(epsilon, run.initial_fi, run.noise_fi);
    const double empirical =
        fisher::empirical_convergence_time(result.variance, run.pattern, epsilon);
    fisher::CheckReport conv;
    conv.name = "convergence_time_bound";
    conv.cells = 1;
    conv.pass = empirical >= bound.bound;
    conv.worst = empirical;
    conv.note = "empirical T=" + fisher::format_double(empirical) +
                ", lower bound=" + fisher::format_double(bound.bound);
    checks.push_back(conv);
  }

  bool all_pass = true;
  nlohmann::json summary;
  summary["delta0"] = run.delta0_value;
  summary["checks"] = nlohmann::json::array();
  for (const auto& check : checks) {
    all_pass = all_pass && check.pass;
    std::cout << (check.pass ? "PASS " : "FAIL ") << check.name;
    if (!check.note.empty()) {
      std::cout << " (" << check.note << ")";
    }
    std::cout << "\n";
    nlohmann::json jc;
    jc["name"] = check.name;
    jc["pass"] = check.pass;
    jc["cells"] = check.cells;
    jc["worst"] = check.worst;
    jc["note"] = check.note;
    jc["violations"] = nlohmann::json::array();
    for (const auto& v : check.violations) {
      jc["violations"].push_back({{"sensor", v.sensor},
                                  {"round", v.round},
                                  {"value", v.value},
                                  {"limit", v.limit}});
    }
    summary["checks"].push_back(jc);
  }
  summary["pass"] = all_pass;

  std::ofstream jout(json_path, std::ios::binary);
  if (!jout) {
    throw fisher::ConfigError("cannot open summary file: " + json_path);
  }
  jout << summary.dump(2) << "\n";
  std::cout << (all_pass ? "ALL CHECKS PASSED" : "CHECKS FAILED")
            << " (summary: " << json_path << ")\n";
  return all_pass ? kExitPass : kExitGateFail;
}

// ------------------------------------------------------------- verify-fii --
int cmd_verify_fii(bool two_d, double rho, int grid_points) {
  bool ok = true;
  const auto gauss1 = fisher::DistributionSpec::gaussian(1.0);
  const auto logistic1 = fisher::DistributionSpec::logistic(1.0);

  {
    const auto grid = fisher::symmetric_grid(20.0, 8193);
    const double slack_gg = fisher::check_fii_1d(gauss1, gauss1, grid);
    const double slack_lg = fisher::check_fii_1d(logistic1, gauss1, grid);
    std::cout << "1-D gaussian (x) gaussian: slack = "
              << fisher::format_double(slack_gg) << " (expect ~0)\n";
    std::cout << "1-D logistic (x) gaussian: slack = "
              << fisher::format_double(slack_lg) << " (expect > 0)\n";
    ok = ok && std::abs(slack_gg) <= 1e-5 && slack_lg >= -1e-5;
  }

  if (two_d) {
    fisher::BivariateGaussianSpec joint{1.0, 1.0, rho};
    const auto axis = fisher::symmetric_grid(15.0, grid_points);
    const auto r = fisher::check_fii_2d_dependent(joint, gauss1, axis);
    const double jp1_exact = 1.0 / (1.0 - rho * rho);
    const double jr_exact = 1.0 / ((1.0 - rho * rho) + 1.0);
    std::cout << "2-D dependent gaussian, rho=" << rho << ":\n"
              << "  J_p1 = " << fisher::format_double(r.j_p1) << " (closed form "
              << fisher::format_double(jp1_exact) << ")\n"
              << "  J_r  = " << fisher::format_double(r.j_r) << " (closed form "
              << fisher::format_double(jr_exact) << ")\n"
              << "  slack = " << fisher::format_double(r.slack) << "\n";
    ok = ok && std::abs(r.j_p1 / jp1_exact - 1.0) <= 1e-4 &&
         std::abs(r.j_r / jr_exact - 1.0) <= 1e-4 && std::abs(r.slack) <= 1e-4;
  }
  std::cout << (ok ? "verify-fii: PASS\n" : "verify-fii: FAIL\n");
  return ok ? kExitPass : kExitGateFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clock synchronization on independent meeting patterns: "
               "simulator, Fisher bounds and verdicts"};
  app.require_subcommand(1);

  // pattern gen / validate
  auto* pattern_cmd = app.add_subcommand("pattern", "pattern tooling");
  pattern_cmd->require_subcommand(1);

  std::string gen_kind = "tournament";
  int gen_n = 2;
  int gen_rounds = 1;
  double gen_density = 0.5;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out = "pattern.json";
  auto* gen = pattern_cmd->add_subcommand("gen", "generate a pattern");
  gen->add_option("--kind", gen_kind, "tournament|random|cycle");
  gen->add_option("--n", gen_n, "sensor count")->required();
  gen->add_option("--rounds", gen_rounds, "rounds (random kind)");
  gen->add_option("--density", gen_density, "observers per round fraction");
  gen->add_option("--seed", gen_seed, "generator seed (or FSYNC_SEED)");
  gen->add_option("-o,--output", gen_out, "output file");

  std::string validate_path;
  auto* validate = pattern_cmd->add_subcommand("validate", "check independence");
  validate->add_option("file", validate_path, "pattern file")->required();

  // bounds
  std::string bounds_config, bounds_pattern, bounds_out = "bounds.csv";
  auto* bounds = app.add_subcommand("bounds", "FI recursion and variance floors");
  bounds->add_option("--config", bounds_config, "run config")->required();
  bounds->add_option("--pattern", bounds_pattern, "pattern override");
  bounds->add_option("-o,--output", bounds_out, "output csv");

  // run
  std::string run_config, run_out, run_dump, run_algorithm;
  int run_workers = static_cast<int>(std::thread::hardware_concurrency());
  auto* run = app.add_subcommand("run", "Monte Carlo experiment");
  run->add_option("--config", run_config, "run config")->required();
  run->add_option("-o,--output", run_out, "output csv");
  run->add_option("--workers", run_workers, "worker threads");
  run->add_option("--dump-trials", run_dump, "per-trial trajectory csv");
  run->add_option("--algorithm", run_algorithm, "override: alg|midpoint");

  // report
  std::string rep_result, rep_bounds, rep_config, rep_json = "report.json";
  double rep_epsilon = 0.0;
  auto* report = app.add_subcommand("report", "pass/fail verdicts");
  report->add_option("--result", rep_result, "result csv")->required();
  report->add_option("--bounds", rep_bounds, "bounds csv")->required();
  report->add_option("--config", rep_config, "run config")->required();
  report->add_option("--epsilon", rep_epsilon, "convergence-time epsilon");
  report->add_option("--json", rep_json, "summary json path");

  // verify-fii
  bool fii_two_d = false;
  double fii_rho = 0.5;
  int fii_grid = 513;
  auto* fii = app.add_subcommand("verify-fii", "Fisher information inequality");
  fii->add_flag("--two-d", fii_two_d, "also run the dependent 2-D case");
  fii->add_option("--rho", fii_rho, "correlation for the 2-D case");
  fii->add_option("--grid", fii_grid, "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      return cmd_pattern_gen(gen_kind, gen_n, gen_rounds, gen_density, gen_seed,
                             gen_out);
    }
    if (validate->parsed()) {
      return cmd_pattern_validate(validate_path);
    }
    if (bounds->parsed()) {
      return cmd_bounds(bounds_config, bounds_pattern, bounds_out);
    }
    if (run->parsed()) {
      return cmd_run(run_config, run_out, run_workers, run_dump, run_algorithm);
    }
    if (report->parsed()) {
      return cmd_report(rep_result, rep_bounds, rep_config, rep_epsilon,
                        rep_json);
    }
    if (fii->parsed()) {
      return cmd_verify_fii(fii_two_d, fii_rho, fii_grid);
    }
  } catch (const fisher::PatternNotIndependent& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotIndependent;
  } catch (const fisher::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
