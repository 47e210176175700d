#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "fsync/rng.hpp"

namespace fisher {

// One directed observation: `observer` looks at `observed` during `round`.
struct MeetingEvent {
  int round = 0;
  int observer = 0;
  int observed = 0;

  friend bool operator==(const MeetingEvent&, const MeetingEvent&) = default;
};

// An oblivious, pre-committed observation schedule over n sensors.
// Events are kept sorted by (round, observer); a sensor performs at most one
// observation per round, but may be observed any number of times.
class MeetingPattern {
 public:
  MeetingPattern() = default;

  // Sorts the events and enforces structure: indices in range, no
  // self-observation, at most one event per (round, observer).
  // Throws InvalidPattern.
  static MeetingPattern make(int n, std::vector<MeetingEvent> events);

  int n() const { return n_; }
  const std::vector<MeetingEvent>& events() const { return events_; }

  // 1 + the largest round holding an event; 0 when there are none.
  int depth() const;

 private:
  int n_ = 0;
  std::vector<MeetingEvent> events_;
};

// Relevant set R_a(round): the sensors whose initial state can have reached
// sensor `a` by `round`. Convention used throughout: an event at round t
// reads round-t states and produces round-(t+1) states, so R_a(0) = {a} and
// an observation of b at round t gives R_a(t+1) = R_a(t) union R_b(t).
// Throws IndexOutOfRange for a bad sensor or round > depth().
std::set<int> relevant_set(const MeetingPattern& pattern, int sensor,
                           int round);

struct IndependenceReport {
  bool valid = true;
  MeetingEvent violation{};  // first offending event (by round, observer)
  std::set<int> shared;      // intersection of the two relevant sets
};

// A pattern is independent when every observation joins two sensors with
// disjoint relevant sets at that round.
IndependenceReport validate_independence(const MeetingPattern& pattern);

// Binary-merge schedule for n = 2^k sensors: round r pairs the current
// blocks and lets one block representative observe the other's, so the final
// representative's relevant set is everything. Labels are shuffled by rng.
// Throws NotPowerOfTwo.
MeetingPattern gen_tournament(int n, Rng& rng);

// Greedy randomized independent pattern. Tracks merge groups (supersets of
// every member's relevant set) and only emits events across distinct groups,
// which keeps the output independent by construction and caps total events
// at n - 1. Per round it aims at ceil(density * n) observers, best effort.
MeetingPattern gen_random_independent(int n, int rounds, double density,
                                      Rng& rng);

// Synchronous doubling schedule: at round r every sensor i observes sensor
// (i + 2^r) mod n, for as long as 2^(r+1) <= n. Relevant sets are contiguous
// arcs, so the pattern is independent, every sensor observes in every round,
// and the depth is floor(log2(n)). Requires n >= 2.
MeetingPattern gen_cycle(int n);

inline int depth(const MeetingPattern& pattern) { return pattern.depth(); }

// JSON persistence: {"n": 8, "events": [{"round":0,"observer":0,"observed":1}]}
// The loader accepts unsorted events and revalidates structure.
std::string pattern_to_json(const MeetingPattern& pattern);
MeetingPattern pattern_from_json(const std::string& text);
void save_pattern(const MeetingPattern& pattern,
                  const std::filesystem::path& path);
MeetingPattern load_pattern(const std::filesystem::path& path);

}  // namespace fisher
