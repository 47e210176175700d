#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fsync/dist.hpp"
#include "fsync/montecarlo.hpp"

namespace fisher {

// Distribution spec wire format, e.g. {"kind":"gaussian","variance":1.0}.
// Unknown or missing fields are rejected.
std::string spec_to_json_string(const DistributionSpec& spec);
DistributionSpec spec_from_json_string(const std::string& text);

struct RunConfig {
  std::filesystem::path pattern_path;
  std::vector<DistributionSpec> catalog_initial;
  std::optional<DistributionSpec> noise;
  // round-robin over catalog_initial unless an explicit per-sensor map of
  // catalog indices is given
  std::optional<std::vector<int>> explicit_assignment;
  Algorithm algorithm = Algorithm::Alg;
  std::int64_t trials = 2;
  TauStarPolicy tau_star = TauStarPolicy::fixed(0.0);
  std::optional<std::uint64_t> seed;  // falls back to FSYNC_SEED
  std::set<int> anchored;
  std::optional<std::string> output;
};

// Strict parser for the versioned run-config file: "version" must equal 1
// and unknown fields anywhere in the document are errors.
// Throws ConfigError.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Expands the config against a loaded pattern: builds the per-sensor
// assignment (round robin or explicit) and checks anchored indices.
std::vector<DistributionSpec> build_assignment(const RunConfig& config,
                                               int sensor_count);

// Seed resolution: config value, else the FSYNC_SEED environment variable.
// Throws ConfigError when neither is present.
std::uint64_t resolve_seed(const RunConfig& config);

}  // namespace fisher
