#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "fsync/bounds.hpp"
#include "fsync/montecarlo.hpp"

namespace fisher {

// 17 significant digits, enough to round-trip any double; "inf"/"nan" spelled
// out so files stay locale-independent.
std::string format_double(double value);

// bounds.csv: sensor,round,J,var_floor   (RFC 4180, LF endings)
void write_bounds_csv(const FisherTrajectory& traj,
                      const std::filesystem::path& path);
FisherTrajectory read_bounds_csv(const std::filesystem::path& path);

// result.csv:
//   sensor,round,mean,variance,accuracy,fi_bound,var_floor,ratio_var_times_J
// Ratio cells are blank for the midpoint baseline; blank reads back as NaN.
void write_result_csv(const ExperimentResult& result,
                      const std::filesystem::path& path);
ExperimentResult read_result_csv(const std::filesystem::path& path);

// trial dump: trial,sensor,round,opinion,accuracy
void write_trial_dump_header(std::ostream& out);
void write_trial_dump_rows(std::ostream& out, std::int64_t trial,
                           const TrialTrajectory& traj);

}  // namespace fisher
