#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace blockdyn::rng {

// Counter-based generator: every draw is a hash of (stream key, counter).
// Streams are addressed by labeled paths derived from one root seed, so any
// sample can be regenerated in isolation and parallel schedules cannot
// change the result.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
  // FNV-1a, folded through mix64 for avalanche.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return mix64(h);
}

class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ + kGolden * ++ctr_); }

  // Uniform on (0, 1]; never returns 0 so log() is safe.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the second member of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  bool bernoulli(double p) { return uniform01() <= p; }

  // +1 or -1 with equal probability.
  int rademacher() { return (next_u64() & 1u) ? 1 : -1; }

  std::uint64_t index_below(std::uint64_t n) { return next_u64() % n; }

  Stream child(std::uint64_t idx) const {
    return Stream(mix64(key_ ^ (kGolden * (idx + 0x51ED2701ull))));
  }

  Stream child(std::string_view label) const {
    return Stream(mix64(key_ ^ hash_label(label)));
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Root of the stream tree for a run. All randomness hangs off (seed, label).
class Root {
 public:
  explicit Root(std::uint64_t seed) : seed_(mix64(seed ^ 0xA24BAED4963EE407ull)) {}

  Stream stream(std::string_view label) const {
    return Stream(mix64(seed_ ^ hash_label(label)));
  }

  Stream stream(std::string_view label, std::uint64_t idx) const {
    return stream(label).child(idx);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace blockdyn::rng
