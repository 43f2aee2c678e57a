#pragma once

#include <cstdint>
#include <random>

namespace addbasis {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'0f'ad'd1'7b'a5e5ULL;

// SplitMix64 finaliser: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Seed of stream `index` under `master`. Distinct indices give distinct seeds
// because the argument of mix64 is distinct (odd gamma) and mix64 is bijective.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * kGoldenGamma);
}

constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform in [0,1) addressed by (key, index) without any sequential state, so
// inclusion decisions for element n do not depend on evaluation order.
constexpr double counter_uniform(std::uint64_t key, std::uint64_t index) {
  return to_unit_interval(mix64(mix64(key) + (index + 1) * kGoldenGamma));
}

// Sequential generator for urn draws and similar. The engine's output is fixed
// by the standard; the bounded draw below is ours so results do not depend on
// the library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    __extension__ typedef unsigned __int128 Wide;
    Wide product = static_cast<Wide>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<Wide>(engine_()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  double unit() { return to_unit_interval(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace addbasis
