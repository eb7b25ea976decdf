#pragma once

// Closed-form evaluation of the concentration and variance bounds for the
// Laplace estimator under KL loss, plus the auxiliary facts their proofs use.
// Constants are the published ones (6, 311, 160, 36, 32).

#include <cstdint>

namespace klconc::bounds {

/// Alphabet size k >= 1, sample size n >= 1, failure probability in (0, 1).
struct BoundInputs {
  std::uint64_t k = 1;
  std::uint64_t n = 1;
  double delta = 0.1;

  /// Throws ValidationError on out-of-range fields.
  static BoundInputs make(std::uint64_t k, std::uint64_t n, double delta);
};

/// sqrt(n c^2 / 2 * log(1/delta)): McDiarmid deviation when every coordinate
/// has bounded difference c_inf.
double mcdiarmid_deviation(double c_inf, std::uint64_t n, double delta);

/// Deviation term t_delta of the main concentration bound,
///   6 sqrt(k log^5(4k/delta)) / n + 311/n + 160 k / n^{3/2},
/// so KL(p || Laplace) <= E[KL] + t_delta with probability >= 1 - delta.
double thm_kl_bound(const BoundInputs& b);

/// Previous-best deviation (k/n) log n log(k/delta). Only known up to
/// constants; evaluated with constant 1 and should be labelled approximate.
/// Requires n >= 2.
double bgpv_deviation(const BoundInputs& b);

/// k / (32 n^2), the variance lower bound for uniform p. Throws
/// PreconditionError unless n >= 10k.
double variance_lower_bound(std::uint64_t k, std::uint64_t n);

/// sqrt(k/2) / n, the asymptotic standard deviation of KL for uniform p.
double heuristic_std(std::uint64_t k, std::uint64_t n);

/// 6 sqrt(n_obs + 1) log(2/delta): radius such that a Poisson N satisfies
/// |N + 1 - lambda| <= radius(N) with probability >= 1 - delta.
double poisson_tail_radius(std::uint64_t n_obs, double delta);

/// 311/n + 160 k / n^{3/2}: multinomial vs Poissonized expectation gap.
double gamma_term(std::uint64_t k, std::uint64_t n);

/// 36 log^2(4k/delta) / n: per-symbol clip level of the main proof.
double clip_threshold_alpha(const BoundInputs& b);

/// E[1/(X+1)] = (1 - (1-p)^{m+1}) / (p (m+1)) for X ~ Bin(m, p), p in (0,1].
double binom_inv_moment(std::uint64_t m, double prob);

/// Upper bound 1/(p^2 (m+1)(m+2)) on E[1/((X+1)(X+2))].
double binom_inv_moment2_bound(std::uint64_t m, double prob);

/// E[1/((X+1)(X+2))] by exact summation over the binomial pmf.
double binom_inv_moment2_exact(std::uint64_t m, double prob);

/// Pr[Poi(n) = n] = e^{-n} n^n / n!, in log space via the Stirling remainder.
double poisson_pmf_at_mean(std::uint64_t n);

/// (n0^2 - n0) / 8 = Var(N1 (n0 - N1)) for N1 ~ Bin(n0, 1/2).
double var_product_split(std::uint64_t n0);

/// Expectation-gap bound for one coordinate of the coupling,
/// 311/n + 160 / (n^{3/2} prob).
double coupling_gap_bound(std::uint64_t n, double prob);

}  // namespace klconc::bounds
