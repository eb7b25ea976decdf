#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace klconc {

/// SplitMix64 output function: a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class RngState {
 public:
  using result_type = std::uint64_t;

  /// Expands a single seed word with SplitMix64.
  explicit RngState(std::uint64_t seed) noexcept;
  explicit RngState(const std::array<std::uint64_t, 4>& state) noexcept : s_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) without modulo bias (Lemire). bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  friend bool operator==(const RngState&, const RngState&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Stream for one trial. Counter-style: the four state words are SplitMix64
/// outputs at positions 4*trial_index + {1,2,3,4} past a hash of the master
/// seed, so streams depend only on (master_seed, trial_index) and distinct
/// trials never share a state word.
RngState derive_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

}  // namespace klconc
