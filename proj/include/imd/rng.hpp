#pragma once
#include <cstdint>
#include <random>

namespace imd {

// splitmix64 mixing function; used to derive decorrelated per-chain seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Thin deterministic wrapper around mt19937_64.  Variates are produced
// without the std <random> distributions so that output is identical across
// standard library implementations; every helper consumes exactly one engine
// draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next_u64() { return eng_(); }
  // uniform double in [0,1), 53 random bits
  double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  // uniform integer in [0,n) by 128-bit multiply-shift
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * static_cast<unsigned __int128>(n)) >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

// Stream derivation: chain c of a run with master seed s is driven by
// mt19937_64 seeded with splitmix64(s + c).  No global state.
inline Rng chain_rng(std::uint64_t master_seed, std::uint64_t chain) {
  return Rng(splitmix64(master_seed + chain));
}

}  // namespace imd
