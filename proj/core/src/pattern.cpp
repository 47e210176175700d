#include "fsync/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fsync/errors.hpp"

namespace fisher {

namespace {

bool event_order(const MeetingEvent& a, const MeetingEvent& b) {
  if (a.round != b.round) return a.round < b.round;
  if (a.observer != b.observer) return a.observer < b.observer;
  return a.observed < b.observed;
}

}  // namespace

MeetingPattern MeetingPattern::make(int n, std::vector<MeetingEvent> events) {
  if (n < 1) {
    throw InvalidPattern("sensor count must be >= 1");
  }
  std::sort(events.begin(), events.end(), event_order);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.round < 0) {
      throw InvalidPattern("event round must be nonnegative");
    }
    if (e.observer < 0 || e.observer >= n || e.observed < 0 ||
        e.observed >= n) {
      throw InvalidPattern("event sensor index out of range");
    }
    if (e.observer == e.observed) {
      throw InvalidPattern("a sensor cannot observe itself");
    }
    if (i > 0 && events[i - 1].round == e.round &&
        events[i - 1].observer == e.observer) {
      throw InvalidPattern("a sensor may observe at most once per round");
    }
  }
  MeetingPattern p;
  p.n_ = n;
  p.events_ = std::move(events);
  return p;
}

int MeetingPattern::depth() const {
  return events_.empty() ? 0 : events_.back().round + 1;
}

std::set<int> relevant_set(const MeetingPattern& pattern, int sensor,
                           int round) {
  if (sensor < 0 || sensor >= pattern.n()) {
    throw IndexOutOfRange("sensor index out of range");
  }
  if (round < 0 || round > pattern.depth()) {
    throw IndexOutOfRange("round beyond pattern depth");
  }
  std::vector<std::set<int>> sets(pattern.n());
  for (int a = 0; a < pattern.n(); ++a) {
    sets[a].insert(a);
  }
  auto it = pattern.events().begin();
  const auto end = pattern.events().end();
  for (int t = 0; t < round; ++t) {
    // all events of round t read the round-t sets; apply merges afterwards
    std::vector<std::pair<int, std::set<int>>> merged;
    for (; it != end && it->round == t; ++it) {
      std::set<int> u = sets[it->observer];
      u.insert(sets[it->observed].begin(), sets[it->observed].end());
      merged.emplace_back(it->observer, std::move(u));
    }
    for (auto& [a, u] : merged) {
      sets[a] = std::move(u);
    }
  }
  return sets[sensor];
}

IndependenceReport validate_independence(const MeetingPattern& pattern) {
  std::vector<std::set<int>> sets(pattern.n());
  for (int a = 0; a < pattern.n(); ++a) {
    sets[a].insert(a);
  }
  auto it = pattern.events().begin();
  const auto end = pattern.events().end();
  while (it != end) {
    const int t = it->round;
    std::vector<std::pair<int, std::set<int>>> merged;
    for (; it != end && it->round == t; ++it) {
      const auto& ra = sets[it->observer];
      const auto& rb = sets[it->observed];
      std::set<int> shared;
      std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(),
                            std::inserter(shared, shared.begin()));
      if (!shared.empty()) {
        // events are scanned in (round, observer) order, so this is the
        // first violation
        return {false, *it, std::move(shared)};
      }
      std::set<int> u = ra;
      u.insert(rb.begin(), rb.end());
      merged.emplace_back(it->observer, std::move(u));
    }
    for (auto& [a, u] : merged) {
      sets[a] = std::move(u);
    }
  }
  return {};
}

MeetingPattern gen_tournament(int n, Rng& rng) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw NotPowerOfTwo("tournament needs a power-of-two sensor count");
  }
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % (i + 1));
    std::swap(label[i], label[j]);
  }
  std::vector<MeetingEvent> events;
  events.reserve(n - 1);
  int round = 0;
  for (int block = 1; block < n; block *= 2, ++round) {
    for (int i = 0; i + block < n; i += 2 * block) {
      events.push_back({round, label[i], label[i + block]});
    }
  }
  return MeetingPattern::make(n, std::move(events));
}

MeetingPattern gen_random_independent(int n, int rounds, double density,
                                      Rng& rng) {
  if (n < 2) {
    throw InvalidPattern("random independent pattern needs n >= 2");
  }
  if (rounds < 1) {
    throw InvalidPattern("rounds must be >= 1");
  }
  if (!(density > 0.0) || density > 1.0) {
    throw InvalidPattern("density must lie in (0, 1]");
  }

  // Union-find over merge groups. Each group is a superset of the relevant
  // set of every member, so any cross-group event is safe.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto shuffle = [&](std::vector<int>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_u64() % (i + 1));
      std::swap(v[i], v[j]);
    }
  };

  const int quota = std::max(1, static_cast<int>(density * n + 0.5));
  std::vector<MeetingEvent> events;
  std::vector<int> targets(n);
  std::iota(targets.begin(), targets.end(), 0);

  for (int t = 0; t < rounds; ++t) {
    shuffle(order);
    int emitted = 0;
    for (int a : order) {
      if (emitted >= quota) break;
      shuffle(targets);
      for (int b : targets) {
        if (b == a) continue;
        const int ga = find(a);
        const int gb = find(b);
        if (ga == gb) continue;
        events.push_back({t, a, b});
        // merge immediately: groups stay disjoint partition classes, so
        // later same-round events remain valid and each event costs one
        // union, bounding the total at n - 1
        parent[ga] = gb;
        ++emitted;
        break;
      }
    }
  }
  return MeetingPattern::make(n, std::move(events));
}

MeetingPattern gen_cycle(int n) {
  if (n < 2) {
    throw InvalidPattern("cycle pattern needs n >= 2");
  }
  std::vector<MeetingEvent> events;
  int round = 0;
  for (int stride = 1; 2 * stride <= n; stride *= 2, ++round) {
    for (int i = 0; i < n; ++i) {
      events.push_back({round, i, (i + stride) % n});
    }
  }
  return MeetingPattern::make(n, std::move(events));
}

std::string pattern_to_json(const MeetingPattern& pattern) {
  nlohmann::json j;
  j["n"] = pattern.n();
  j["events"] = nlohmann::json::array();
  for (const auto& e : pattern.events()) {
    j["events"].push_back(
        {{"round", e.round}, {"observer", e.observer}, {"observed", e.observed}});
  }
  return j.dump(2) + "\n";
}

MeetingPattern pattern_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidPattern(std::string("pattern file is not valid JSON: ") +
                         e.what());
  }
  if (!j.is_object()) {
    throw InvalidPattern("pattern file must hold a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "events") {
      throw InvalidPattern("unknown pattern field: " + key);
    }
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw InvalidPattern("pattern file needs an integer \"n\"");
  }
  if (!j.contains("events") || !j["events"].is_array()) {
    throw InvalidPattern("pattern file needs an \"events\" array");
  }
  std::vector<MeetingEvent> events;
  events.reserve(j["events"].size());
  for (const auto& je : j["events"]) {
    if (!je.is_object()) {
      throw InvalidPattern("each event must be a JSON object");
    }
    for (const auto& [key, value] : je.items()) {
      if (key != "round" && key != "observer" && key != "observed") {
        throw InvalidPattern("unknown event field: " + key);
      }
    }
    if (!je.contains("round") || !je.contains("observer") ||
        !je.contains("observed")) {
      throw InvalidPattern("event needs round, observer and observed");
    }
    events.push_back({je["round"].get<int>(), je["observer"].get<int>(),
                      je["observed"].get<int>()});
  }
  return MeetingPattern::make(j["n"].get<int>(), std::move(events));
}

void save_pattern(const MeetingPattern& pattern,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open pattern file for writing: " + path.string());
  }
  out << pattern_to_json(pattern);
}

MeetingPattern load_pattern(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidPattern("cannot open pattern file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return pattern_from_json(buf.str());
}

}  // namespace fisher
