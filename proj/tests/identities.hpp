#pragma once

// Randomised property checks of the loss identities, shared by the unit
// tests and the acceptance binary. Oracles use long double arithmetic.
//
// Identities that involve a signed sum of logarithms are compared relative
// to the sum of absolute term magnitudes (the conditioning scale of the
// sum); the KL value itself can be ~1e-10 while its terms are ~1e-5.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "klconc/dist.hpp"
#include "klconc/losses.hpp"
#include "klconc/rng.hpp"
#include "klconc/sampling.hpp"

namespace identities {

struct Stats {
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // worst relative error (or most negative term)
};

inline constexpr double kRelTol = 1e-12;

inline klconc::Pmf random_pmf(std::mt19937_64& gen, std::size_t k, double zero_prob) {
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution zero(zero_prob);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) {
    x = zero(gen) ? 0.0 : expo(gen);
    s += x;
  }
  if (s == 0.0) {
    w[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : w) x /= s;
  return klconc::make_pmf(w);
}

inline std::uint64_t log_uniform(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return static_cast<std::uint64_t>(std::llround(std::exp(u(gen))));
}

// kl_tilde(p, q) == kl(p, q) + shift(n, k) for Pmf arguments.
inline Stats shift_identity(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 gen(seed);
  klconc::RngState rng(seed);
  Stats st;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = log_uniform(gen, 1, 300);
    const std::uint64_t n = log_uniform(gen, 1, 1e6);
    const klconc::Pmf p = random_pmf(gen, k, 0.1);
    // Half the cases use a Laplace estimate of p, half an unrelated pmf.
    const klconc::Pmf q = c % 2 == 0 ? klconc::add_t_estimate(klconc::multinomial_counts(rng, p, n), 1.0)
                                     : random_pmf(gen, k, 0.0);
    const double tilde = klconc::kl_tilde(p, q, n, k);
    const double kl = klconc::kl_divergence(p, q);
    const double shift = klconc::kl_tilde_shift(n, k);

    // The identity assumes both inputs sum to exactly one. For the stored
    // doubles the residual is s (sum q - 1) - (1 + log s)(sum p - 1).
    using Big = boost::multiprecision::cpp_bin_float_50;
    Big sum_p = 0, sum_q = 0;
    for (std::size_t i = 0; i < k; ++i) {
      sum_p += p[i];
      sum_q += q[i];
    }
    const Big s = Big(n + k) / n;
    const Big defect = s * (sum_q - 1) - (1 + log(s)) * (sum_p - 1);

    long double scale = std::abs(tilde) + shift;
    for (std::size_t i = 0; i < k; ++i) {
      if (p[i] > 0) scale += std::abs(static_cast<long double>(p[i]) * std::log(static_cast<long double>(p[i]) / q[i]));
    }
    const Big residual = Big(tilde) - Big(kl) - Big(shift) - defect;
    const double err = static_cast<double>(abs(residual).convert_to<long double>() / scale);
    st.worst = std::max(st.worst, err);
    st.violations += err <= kRelTol ? 0 : 1;
    ++st.cases;
  }
  return st;
}

// For uniform p and the Laplace estimate:
//   KL = -(1/k) sum_i log(N_i + 1) + log(1 + n/k).
inline Stats uniform_decomposition(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 gen(seed);
  klconc::RngState rng(seed ^ 0x5bd1e995ULL);
  Stats st;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = log_uniform(gen, 1, 300);
    const std::uint64_t n = log_uniform(gen, 1, 1e6);
    const klconc::Pmf p = klconc::uniform_pmf(k);
    const klconc::Counts counts = klconc::multinomial_counts(rng, p, n);
    const double kl = klconc::kl_divergence(p, klconc::add_t_estimate(counts, 1.0));

    const long double kd = static_cast<long double>(k);
    long double sum_logs = 0.0L;
    for (std::size_t i = 0; i < k; ++i) sum_logs += std::log(static_cast<long double>(counts[i]) + 1.0L);
    const long double cnk = std::log1p(static_cast<long double>(n) / kd);
    const long double oracle = -sum_logs / kd + cnk;
    const long double scale = sum_logs / kd + cnk;

    const double err = static_cast<double>(std::abs(kl - oracle) / scale);
    st.worst = std::max(st.worst, err);
    st.violations += err <= kRelTol ? 0 : 1;
    ++st.cases;
  }
  return st;
}

// p_i log(n p_i / (N'_i + 1)) + (N'_i + 1)/n - p_i >= 0 for every symbol.
inline Stats per_term_nonnegativity(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 gen(seed);
  klconc::RngState rng(seed ^ 0x9e3779b9ULL);
  Stats st;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = log_uniform(gen, 1, 100);
    const std::uint64_t n = log_uniform(gen, 1, 1e6);
    const klconc::Pmf p = random_pmf(gen, k, 0.2);
    const klconc::Counts counts = klconc::poissonized_counts(rng, p, n);
    for (std::size_t i = 0; i < k; ++i) {
      const double term = klconc::pseudo_kl_term(p[i], counts[i], n);
      st.worst = std::min(st.worst, term);
      st.violations += term >= 0.0 ? 0 : 1;
    }
    ++st.cases;
  }
  return st;
}

// sum_i (N'_i + 1)/(n + k) == (N + k)/(n + k).
inline Stats pseudo_sum_identity(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 gen(seed);
  klconc::RngState rng(seed ^ 0x85ebca6bULL);
  Stats st;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = log_uniform(gen, 1, 1000);
    const std::uint64_t n = log_uniform(gen, 1, 1e7);
    const klconc::Pmf p = random_pmf(gen, k, 0.1);
    const klconc::Counts counts = klconc::poissonized_counts(rng, p, n);
    const double total = klconc::pseudo_estimate(counts, n).total();
    const long double expect = (static_cast<long double>(counts.total()) + k) / (static_cast<long double>(n) + k);
    const double err = static_cast<double>(std::abs(total - expect) / expect);
    st.worst = std::max(st.worst, err);
    st.violations += err <= kRelTol ? 0 : 1;
    ++st.cases;
  }
  return st;
}

}  // namespace identities
