#include "fsync/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fsync/errors.hpp"

namespace fisher {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("unknown field \"" + key + "\" in " + where);
    }
  }
}

double require_number(const json& obj, const char* key,
                      const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(where + " needs a numeric \"" + std::string(key) + "\"");
  }
  return obj[key].get<double>();
}

DistributionSpec spec_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(where + " must be an object with a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "gaussian") {
    reject_unknown(j, {"kind", "variance"}, where);
    return DistributionSpec::gaussian(require_number(j, "variance", where));
  }
  if (kind == "logistic") {
    reject_unknown(j, {"kind", "scale"}, where);
    return DistributionSpec::logistic(require_number(j, "scale", where));
  }
  if (kind == "mixture2") {
    reject_unknown(j, {"kind", "weight", "offset", "component_variance"},
                   where);
    return DistributionSpec::mixture2(
        require_number(j, "weight", where), require_number(j, "offset", where),
        require_number(j, "component_variance", where));
  }
  throw ConfigError(where + " has unsupported kind \"" + kind + "\"");
}

json spec_to_json(const DistributionSpec& spec) {
  switch (spec.kind()) {
    case DistKind::Gaussian:
      return {{"kind", "gaussian"}, {"variance", spec.gaussian_variance()}};
    case DistKind::Logistic:
      return {{"kind", "logistic"}, {"scale", spec.logistic_scale()}};
    case DistKind::Mixture2:
      return {{"kind", "mixture2"},
              {"weight", spec.mixture_weight()},
              {"offset", spec.mixture_offset()},
              {"component_variance", spec.mixture_component_variance()}};
  }
  throw ConfigError("unreachable distribution kind");
}

}  // namespace

std::string spec_to_json_string(const DistributionSpec& spec) {
  return spec_to_json(spec).dump();
}

DistributionSpec spec_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(j, "distribution spec");
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  reject_unknown(j,
                 {"version", "pattern", "catalog", "assignment", "algorithm",
                  "trials", "tau_star", "seed", "anchored", "output"},
                 "config");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1) {
    throw ConfigError("config needs \"version\": 1");
  }

  RunConfig config;
  if (!j.contains("pattern") || !j["pattern"].is_string()) {
    throw ConfigError("config needs a \"pattern\" file path");
  }
  config.pattern_path = j["pattern"].get<std::string>();

  if (!j.contains("catalog") || !j["catalog"].is_object()) {
    throw ConfigError("config needs a \"catalog\" object");
  }
  const json& catalog = j["catalog"];
  reject_unknown(catalog, {"initial", "noise"}, "catalog");
  if (!catalog.contains("initial") || !catalog["initial"].is_array() ||
      catalog["initial"].empty()) {
    throw ConfigError("catalog needs a nonempty \"initial\" array");
  }
  for (const auto& js : catalog["initial"]) {
    config.catalog_initial.push_back(spec_from_json(js, "catalog.initial"));
  }
  if (!catalog.contains("noise")) {
    throw ConfigError("catalog needs a \"noise\" spec");
  }
  config.noise = spec_from_json(catalog["noise"], "catalog.noise");

  if (j.contains("assignment")) {
    const json& assign = j["assignment"];
    if (!assign.is_object() || !assign.contains("rule") ||
        !assign["rule"].is_string()) {
      throw ConfigError("assignment needs a \"rule\"");
    }
    const std::string rule = assign["rule"].get<std::string>();
    if (rule == "round_robin") {
      reject_unknown(assign, {"rule"}, "assignment");
    } else if (rule == "explicit") {
      reject_unknown(assign, {"rule", "map"}, "assignment");
      if (!assign.contains("map") || !assign["map"].is_array()) {
        throw ConfigError("explicit assignment needs a \"map\" array");
      }
      std::vector<int> map;
      for (const auto& v : assign["map"]) {
        if (!v.is_number_integer()) {
          throw ConfigError("assignment map entries must be integers");
        }
        map.push_back(v.get<int>());
      }
      config.explicit_assignment = std::move(map);
    } else {
      throw ConfigError("assignment rule must be round_robin or explicit");
    }
  }

  if (j.contains("algorithm")) {
    if (!j["algorithm"].is_string()) {
      throw ConfigError("algorithm must be \"alg\" or \"midpoint\"");
    }
    const std::string alg = j["algorithm"].get<std::string>();
    if (alg == "alg") {
      config.algorithm = Algorithm::Alg;
    } else if (alg == "midpoint") {
      config.algorithm = Algorithm::Midpoint;
    } else {
      throw ConfigError("algorithm must be \"alg\" or \"midpoint\"");
    }
  }

  if (!j.contains("trials") || !j["trials"].is_number_integer()) {
    throw ConfigError("config needs an integer \"trials\"");
  }
  config.trials = j["trials"].get<std::int64_t>();
  if (config.trials < 2) {
    throw ConfigError("trials must be >= 2");
  }

  if (j.contains("tau_star")) {
    const json& tau = j["tau_star"];
    if (!tau.is_object() || !tau.contains("policy") ||
        !tau["policy"].is_string()) {
      throw ConfigError("tau_star needs a \"policy\"");
    }
    const std::string policy = tau["policy"].get<std::string>();
    if (policy == "fixed") {
      reject_unknown(tau, {"policy", "value"}, "tau_star");
      config.tau_star = TauStarPolicy::fixed(require_number(tau, "value", "tau_star"));
    } else if (policy == "uniform") {
      reject_unknown(tau, {"policy", "lo", "hi"}, "tau_star");
      const double lo = require_number(tau, "lo", "tau_star");
      const double hi = require_number(tau, "hi", "tau_star");
      if (!(lo < hi)) {
        throw ConfigError("tau_star uniform interval needs lo < hi");
      }
      config.tau_star = TauStarPolicy::uniform(lo, hi);
    } else {
      throw ConfigError("tau_star policy must be fixed or uniform");
    }
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    config.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("anchored")) {
    if (!j["anchored"].is_array()) {
      throw ConfigError("anchored must be an array of sensor indices");
    }
    for (const auto& v : j["anchored"]) {
      if (!v.is_number_integer()) {
        throw ConfigError("anchored entries must be integers");
      }
      config.anchored.insert(v.get<int>());
    }
  }

  if (j.contains("output")) {
    if (!j["output"].is_string()) {
      throw ConfigError("output must be a file path string");
    }
    config.output = j["output"].get<std::string>();
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig config = parse_run_config(buf.str());
  // pattern paths are resolved relative to the config file
  if (config.pattern_path.is_relative()) {
    config.pattern_path = path.parent_path() / config.pattern_path;
  }
  return config;
}

std::vector<DistributionSpec> build_assignment(const RunConfig& config,
                                               int sensor_count) {
  std::vector<DistributionSpec> assignment;
  assignment.reserve(sensor_count);
  if (config.explicit_assignment.has_value()) {
    const auto& map = *config.explicit_assignment;
    if (static_cast<int>(map.size()) != sensor_count) {
      throw AssignmentIncomplete("assignment map covers " +
                                 std::to_string(map.size()) + " of " +
                                 std::to_string(sensor_count) + " sensors");
    }
    for (int idx : map) {
      if (idx < 0 || idx >= static_cast<int>(config.catalog_initial.size())) {
        throw ConfigError("assignment map index out of catalog range");
      }
      assignment.push_back(config.catalog_initial[idx]);
    }
  } else {
    for (int a = 0; a < sensor_count; ++a) {
      assignment.push_back(
          config.catalog_initial[a % config.catalog_initial.size()]);
    }
  }
  for (int a : config.anchored) {
    if (a < 0 || a >= sensor_count) {
      throw ConfigError("anchored sensor index out of range");
    }
  }
  return assignment;
}

std::uint64_t resolve_seed(const RunConfig& config) {
  if (config.seed.has_value()) {
    return *config.seed;
  }
  if (const char* env = std::getenv("FSYNC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("FSYNC_SEED is not a valid integer");
    }
  }
  throw ConfigError("no seed: set \"seed\" in the config or FSYNC_SEED");
}

}  // namespace fisher
