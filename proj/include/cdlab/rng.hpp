#pragma once

#include <cstdint>

namespace cdlab {

// Deterministic stream splitting: every consumer of randomness derives its own
// statistically independent generator from (seed, purpose, a, b).  Results are
// reproducible bit-for-bit regardless of scheduling, which the output contract
// (byte-identical reruns) depends on.
namespace stream {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t chain = 2;
inline constexpr std::uint64_t init = 3;
inline constexpr std::uint64_t direction = 4;
inline constexpr std::uint64_t replicate = 5;
inline constexpr std::uint64_t misc = 6;
}  // namespace stream

std::uint64_t splitmix64(std::uint64_t& state);

// Stable hash of up to four words, used to key substreams.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t a = 0, std::uint64_t b = 0);

// xoshiro256++ seeded through splitmix64.  Small, fast, and fully owned by the
// caller, so two generators never share hidden state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a = 0,
      std::uint64_t b = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  // Standard normal via Box-Muller; pairs are cached, so draw order is part of
  // the determinism contract.
  double normal();

  // Uniform integer in [0, bound) by the multiply-shift method.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace cdlab
