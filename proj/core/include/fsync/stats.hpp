#pragma once

#include <cstdint>

namespace fisher {

// Welford one-pass mean/variance accumulator with Chan-style merging, so
// per-worker partials can be combined deterministically.
struct RunningMoments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }

  void merge(const RunningMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }

  // Unbiased (n-1) variance; 0 below two samples.
  double variance() const {
    return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1);
  }
};

}  // namespace fisher
