#pragma once

// Exact binomial / Poisson variate generation and the sampling processes
// built on them. No normal or translated approximations anywhere.

#include <cstdint>
#include <span>
#include <vector>

#include "klconc/dist.hpp"
#include "klconc/rng.hpp"

namespace klconc {

/// Exact Bin(m, prob) draw. Inversion by geometric waiting times when
/// m*min(prob, 1-prob) < 10, otherwise Hormann's BTRS transformed rejection.
std::uint64_t binomial(RngState& rng, std::uint64_t m, double prob);

/// Exact Poi(lambda) draw for 0 <= lambda <= 1e12. Multiplication method
/// below 10, Hormann's PTRS above.
std::uint64_t poisson(RngState& rng, double lambda);

/// Multinomial sampler with the conditional-binomial probabilities of a fixed
/// pmf precomputed, so repeated draws cost k binomials and no allocation.
class MultinomialSampler {
 public:
  explicit MultinomialSampler(const Pmf& p);

  [[nodiscard]] std::size_t size() const noexcept { return conditional_.size(); }

  /// Writes Mult(n, p) counts into out (size k).
  void sample_into(RngState& rng, std::uint64_t n, std::span<std::uint64_t> out) const noexcept;

 private:
  // conditional_[i] = p_i / sum_{j >= i} p_j, clamped to [0, 1].
  std::vector<double> conditional_;
};

Counts multinomial_counts(RngState& rng, const Pmf& p, std::uint64_t n);

/// Poissonized counts: each N_i ~ Poi(n p_i) independently, total = sum N_i
/// (which is distributed Poi(n)).
Counts poissonized_counts(RngState& rng, const Pmf& p, std::uint64_t n);

/// One draw of the binomial/Poisson coupling.
struct CoupledPair {
  std::uint64_t m = 0;         // marginal Bin(n, prob)
  std::uint64_t m_prime = 0;   // marginal Poi(n * prob)
  std::uint64_t n_latent = 0;  // N ~ Poi(n)
  std::uint64_t x = 0;         // Bin(min(N, n), prob)
  std::uint64_t y = 0;         // Bin(|n - N|, prob)

  friend bool operator==(const CoupledPair&, const CoupledPair&) = default;
};

/// Draws N ~ Poi(n), X ~ Bin(min(N,n), prob), Y ~ Bin(|n-N|, prob); then
/// (M, M') = (X, X+Y) if N > n, else (X+Y, X). Requires 0 < prob <= 1.
CoupledPair coupled_pair(RngState& rng, std::uint64_t n, double prob);

}  // namespace klconc
