#pragma once

#include <array>
#include <cstdint>
#include <vector>

// Deterministic, portable random number generation. The simulation contract
// requires bit-identical traces for a given seed on every platform, so all
// draws go through our own xoshiro256** implementation instead of the
// standard-library distributions (whose outputs are implementation-defined).

namespace netform {

/// SplitMix64 finalizer (Steele/Lea/Vigna).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// One step of the SplitMix64 sequence; advances `state`.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  return splitmix64_mix(state);
}

/// Seed for subtask `index` under a master seed: the (index+1)-th output of
/// the SplitMix64 stream seeded with `master`. Used to give every sweep
/// replication an isolated stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

/// xoshiro256** by Blackman & Vigna, seeded through SplitMix64.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-1, 1).
  double uniform_signed() { return uniform01() * 2.0 - 1.0; }

  /// Uniform integer in [0, bound); bound > 0. Lemire's multiply-shift with
  /// rejection, exact and platform-independent.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound);
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace netform
