#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

namespace cgcp::analysis {

// Median wall-clock nanoseconds per call. `warmup` calls are discarded first.
// Each timed sample batches enough inner calls that one sample spans at least
// `min_sample_ns`, so timer resolution never dominates.
template <typename Fn>
std::int64_t median_time_ns(Fn&& fn, int reps, int warmup, double min_sample_ns = 2e4) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) fn();

  std::int64_t inner = 1;
  for (;;) {
    const auto t0 = clock::now();
    for (std::int64_t i = 0; i < inner; ++i) fn();
    const double ns = std::chrono::duration<double, std::nano>(clock::now() - t0).count();
    if (ns >= min_sample_ns || inner >= (1 << 24)) break;
    inner *= 2;
  }

  std::vector<double> samples;
  samples.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    for (std::int64_t i = 0; i < inner; ++i) fn();
    const auto t1 = clock::now();
    samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / inner);
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return static_cast<std::int64_t>(samples[samples.size() / 2]);
}

}  // namespace cgcp::analysis
