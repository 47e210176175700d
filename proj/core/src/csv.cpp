#include "fsync/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "fsync/errors.hpp"

namespace fisher {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) {
    throw Error("cannot open for writing: " + path.string());
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

double parse_double(const std::string& field) {
  if (field.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error("bad numeric field: \"" + field + "\"");
  }
  return value;
}

int parse_int(const std::string& field) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error("bad integer field: \"" + field + "\"");
  }
  return value;
}

std::vector<std::vector<std::string>> read_rows(
    const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error("empty csv: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw MismatchedShapes("unexpected csv header in " + path.string());
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_bounds_csv(const FisherTrajectory& traj,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "sensor,round,J,var_floor\n";
  const auto floors = cramer_rao_floor(traj);
  for (int a = 0; a < traj.sensors(); ++a) {
    for (int t = 0; t < traj.rounds(); ++t) {
      out << a << ',' << t << ',' << format_double(traj.values[t][a]) << ','
          << format_double(floors[t][a]) << '\n';
    }
  }
}

FisherTrajectory read_bounds_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path, "sensor,round,J,var_floor");
  int n = 0, rounds = 0;
  for (const auto& row : rows) {
    if (row.size() != 4) {
      throw MismatchedShapes("bounds csv row needs 4 fields");
    }
    n = std::max(n, parse_int(row[0]) + 1);
    rounds = std::max(rounds, parse_int(row[1]) + 1);
  }
  FisherTrajectory traj;
  traj.values.assign(rounds, std::vector<double>(n, 0.0));
  for (const auto& row : rows) {
    traj.values[parse_int(row[1])][parse_int(row[0])] = parse_double(row[2]);
  }
  return traj;
}

void write_result_csv(const ExperimentResult& result,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "sensor,round,mean,variance,accuracy,fi_bound,var_floor,"
         "ratio_var_times_J\n";
  const bool has_bounds = !result.fi_bound.empty();
  for (int a = 0; a < result.n; ++a) {
    for (int t = 0; t < result.rounds; ++t) {
      out << a << ',' << t << ',' << format_double(result.mean[t][a]) << ','
          << format_double(result.variance[t][a]) << ','
          << format_double(result.accuracy[t][a]) << ',';
      if (has_bounds) {
        out << format_double(result.fi_bound[t][a]) << ','
            << format_double(result.var_floor[t][a]) << ',';
        const double ratio = result.ratio_var_times_j[t][a];
        out << (std::isnan(ratio) ? "" : format_double(ratio));
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
}

ExperimentResult read_result_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(
      path,
      "sensor,round,mean,variance,accuracy,fi_bound,var_floor,"
      "ratio_var_times_J");
  int n = 0, rounds = 0;
  for (const auto& row : rows) {
    if (row.size() != 8) {
      throw MismatchedShapes("result csv row needs 8 fields");
    }
    n = std::max(n, parse_int(row[0]) + 1);
    rounds = std::max(rounds, parse_int(row[1]) + 1);
  }
  ExperimentResult result;
  result.n = n;
  result.rounds = rounds;
  auto blank = [&] { return std::vector<std::vector<double>>(
      rounds, std::vector<double>(n, 0.0)); };
  result.mean = blank();
  result.variance = blank();
  result.accuracy = blank();
  result.fi_bound = blank();
  result.var_floor = blank();
  result.ratio_var_times_j = blank();
  for (const auto& row : rows) {
    const int a = parse_int(row[0]);
    const int t = parse_int(row[1]);
    result.mean[t][a] = parse_double(row[2]);
    result.variance[t][a] = parse_double(row[3]);
    result.accuracy[t][a] = parse_double(row[4]);
    result.fi_bound[t][a] = parse_double(row[5]);
    result.var_floor[t][a] = parse_double(row[6]);
    result.ratio_var_times_j[t][a] = parse_double(row[7]);
  }
  return result;
}

void write_trial_dump_header(std::ostream& out) {
  out << "trial,sensor,round,opinion,accuracy\n";
}

void write_trial_dump_rows(std::ostream& out, std::int64_t trial,
                           const TrialTrajectory& traj) {
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    for (std::size_t a = 0; a < traj.states[t].size(); ++a) {
      out << trial << ',' << a << ',' << t << ','
          << format_double(traj.states[t][a].opinion) << ','
          << format_double(traj.states[t][a].accuracy) << '\n';
    }
  }
}

}  // namespace fisher
