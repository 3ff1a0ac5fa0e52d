#pragma once

#include <cstdint>

namespace zdgame {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Counter-based generator: every (replication, player, round) triple hashes
// to its own uniform draw, so the stream does not depend on evaluation order
// and parallel runs reproduce serial ones bit for bit.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t word(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    std::uint64_t h = seed;
    h = mix64(h + kGoldenGamma * (a + 1));
    h = mix64(h + kGoldenGamma * (b + 1));
    h = mix64(h + kGoldenGamma * (c + 1));
    return h;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return static_cast<double>(word(a, b, c) >> 11) * 0x1.0p-53;
  }
};

}  // namespace zdgame
