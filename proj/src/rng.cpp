#include "klconc/rng.hpp"

namespace klconc {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

RngState::RngState(std::uint64_t seed) noexcept {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += kGolden;
    word = mix64(x);
  }
}

__extension__ using u128 = unsigned __int128;

std::uint64_t RngState::below(std::uint64_t bound) noexcept {
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

RngState derive_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  const std::uint64_t base = mix64(master_seed ^ 0x6a09e667f3bcc909ULL);
  std::array<std::uint64_t, 4> state{};
  for (std::uint64_t j = 0; j < 4; ++j) {
    state[j] = mix64(base + (4 * trial_index + j + 1) * kGolden);
  }
  return RngState(state);
}

}  // namespace klconc
