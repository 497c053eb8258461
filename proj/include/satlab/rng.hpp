#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace satlab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t v, int s) { return (v << s) | (v >> (64 - s)); }

}  // namespace detail

/// Deterministic seeded random stream (xoshiro256++ seeded via SplitMix64).
///
/// The pair (seed, stream_id) fully determines the draw sequence. Distinct
/// stream ids give decorrelated sequences, which is how parallel trials stay
/// reproducible: trial i always runs on stream i regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id) {
    std::uint64_t a = seed;
    std::uint64_t b = stream_id;
    std::uint64_t key = detail::splitmix64(a) ^ (detail::splitmix64(b) | 1);
    for (auto& w : state_) w = detail::splitmix64(key);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = 1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next() {
    const std::uint64_t out = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return out;
  }

  /// Unbiased draw from [0, bound) (Lemire multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Top `count` bits of one draw, count in [0, 64].
  std::uint64_t bits(int count) {
    if (count <= 0) return 0;
    if (count > 64) throw std::invalid_argument("RngStream::bits: count > 64");
    return next() >> (64 - count);
  }

  bool coin() { return (next() >> 63) != 0; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace satlab
