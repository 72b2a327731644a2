#pragma once

#include <cstdint>

namespace rde {

// SplitMix64 finalizer. Used purely as a counter-based generator: every
// draw is a hash of (key, counter), so parallel workers never share
// mutable generator state and results are independent of scheduling.
inline constexpr std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ull;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
  return v ^ (v >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Key derivation for a (seed, cell, trial) stream.
  static CounterRng stream(std::uint64_t seed, std::uint64_t cell,
                           std::uint64_t trial) {
    return CounterRng(mix64(seed + mix64(cell + mix64(trial + 1) + 1)));
  }

  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t cell,
                                  std::uint64_t trial) {
    return mix64(seed + mix64(cell + mix64(trial + 1) + 1));
  }

  std::uint64_t next_u64() { return mix64(key_ + ++counter_); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi); degenerate lo == hi yields exactly lo.
  double next(double lo, double hi) { return lo + next_unit() * (hi - lo); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rde
