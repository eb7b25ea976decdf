#pragma once

// Loss functions between a true pmf and an estimate. Natural logarithm
// throughout. Infinite divergence is returned as +infinity, never thrown.

#include <cstdint>
#include <span>

#include "klconc/dist.hpp"

namespace klconc {

/// KL(p || q) = sum_i p_i log(p_i / q_i). Terms with p_i = 0 contribute 0
/// even when q_i = 0; any p_i > 0 with q_i = 0 gives +infinity.
double kl_divergence(const Pmf& p, const Measure& q);

/// The shifted divergence defined for measures:
///   KL(p || q) + ((n+k)/n) sum q_i + (log(n/(n+k)) - 1) sum p_i
/// evaluated as a sum of per-symbol terms that are each nonnegative.
double kl_tilde(const Pmf& p, const Measure& q, std::uint64_t n, std::uint64_t k);

/// Reference evaluation of kl_tilde in its three-term form.
double kl_tilde_three_term(const Pmf& p, const Measure& q, std::uint64_t n, std::uint64_t k);

/// kl_tilde - kl_divergence when both arguments sum to 1:
/// (n+k)/n - log((n+k)/n) - 1.
double kl_tilde_shift(std::uint64_t n, std::uint64_t k);

/// One summand of kl_tilde against the pseudo-estimator:
///   p_i log(n p_i / (count + 1)) + (count + 1)/n - p_i  (>= 0).
double pseudo_kl_term(double p_i, std::uint64_t count, std::uint64_t n);

/// l_r distance; pass r = +infinity for the max norm.
double lr_distance(const Pmf& p, const Pmf& q, double r);

// Span kernel for the trial loop; lengths must match.
double kl_divergence(std::span<const double> p, std::span<const double> q) noexcept;

}  // namespace klconc
