#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace ipfusion {

// Counter-based random stream: every draw is a pure function of
// (seed, stream name, index), so streams are independent substreams and adding
// a sensor never perturbs another sensor's draws. Same inputs, same bytes.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::string_view stream)
      : key_(mix(seed ^ fnv1a(stream))) {}

  // Uniform in [0, 1).
  double uniform(std::uint64_t index) const {
    return to_unit(mix(key_ ^ (0x9e3779b97f4a7c15ull * (index + 1))));
  }

  // Standard normal via Box-Muller on draw pair (2*index, 2*index + 1).
  double normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  // Exponential with the given mean (>= 0 always).
  double exponential(std::uint64_t index, double mean) const {
    return -mean * std::log1p(-uniform(index));
  }

  // Bernoulli(p) trial.
  bool keep(std::uint64_t index, double p) const { return uniform(index) < p; }

 private:
  static constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
      h ^= static_cast<std::uint8_t>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  // splitmix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static double to_unit(std::uint64_t z) {
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  std::uint64_t key_;
};

}  // namespace ipfusion
