#include "cdlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace cdlab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = seed;
  splitmix64(h);
  h ^= purpose * 0xD6E8FEB86659FD93ULL;
  splitmix64(h);
  h ^= a * 0xA2AA033B645BD3C9ULL;
  splitmix64(h);
  h ^= b * 0x9E3779B97F4A7C15ULL;
  return splitmix64(h);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
  // xoshiro256++ requires a nonzero state; splitmix64 output is zero for all
  // four words with probability 2^-256, but guard anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 1;
}

Rng::Rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a,
         std::uint64_t b)
    : Rng(derive_stream(seed, purpose, a, b)) {}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - u keeps the log argument strictly positive.
  const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01()));
  const double t = 2.0 * std::numbers::pi * uniform01();
  cached_normal_ = r * std::sin(t);
  has_cached_normal_ = true;
  return r * std::cos(t);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

}  // namespace cdlab
