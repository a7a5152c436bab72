#pragma once

#include <cstdint>
#include <random>

namespace hdpmean {

// Finalizer from Vigna's splitmix64; decorrelates (seed, stream-id) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic uniform stream. Identical (seed, stream) produces
/// bit-identical draws on every platform: raw mt19937_64 output is fixed by
/// the standard and the double conversion below bypasses
/// std::uniform_real_distribution, whose output is implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Substream for one Monte Carlo trial; trials are independent and may be
  // evaluated in any order or on any thread without changing results.
  static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial) {
    return RandomStream(splitmix64(splitmix64(seed) ^
                                   splitmix64(trial + 0x517cc1b727220a95ULL)));
  }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hdpmean
