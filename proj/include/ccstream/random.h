#pragma once

#include <cstdint>
#include <random>

namespace ccstream {

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-seed for a named purpose. Fixed scheme, so a master seed
// reproduces a whole run bit for bit.
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t tag) {
  return Mix64(Mix64(master) ^ Mix64(tag * 0xd1b54a32d192ed03ULL + 1));
}

namespace seed_tag {
inline constexpr std::uint64_t kRank = 1;
inline constexpr std::uint64_t kSampleS1 = 2;
inline constexpr std::uint64_t kSampleS2 = 3;
inline constexpr std::uint64_t kSampleB = 4;
inline constexpr std::uint64_t kPairs = 5;
inline constexpr std::uint64_t kRepetition = 6;
inline constexpr std::uint64_t kGraph = 7;
}  // namespace seed_tag

// mt19937_64 with a portable bounded-integer draw (the standard
// distributions are implementation-defined, which would break byte-identical
// output across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % bound;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ccstream
