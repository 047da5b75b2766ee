#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace cgcp {

// Invalid caller input (bad rank, dimension mismatch, malformed spec string, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values or otherwise failed numerics. `iteration` is the ALS sweep
// index when the failure happened inside an iterative solve, -1 otherwise.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg, long iteration = -1)
      : std::runtime_error(msg), iteration(iteration) {}
  long iteration;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic per-stream RNG: the stream ids are folded into the seed so that
// e.g. (seed, L, schedule) and (seed, restart) streams never collide.
inline std::mt19937_64 seeded_rng(std::uint64_t seed,
                                  std::initializer_list<std::uint64_t> stream = {}) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t v : stream) s = splitmix64(s ^ (v + 0x9e3779b97f4a7c15ull));
  return std::mt19937_64(s);
}

}  // namespace cgcp
