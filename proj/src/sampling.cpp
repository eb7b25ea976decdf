#include "klconc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klconc/error.hpp"
#include "klconc/special.hpp"
#include "klconc/summation.hpp"

namespace klconc {
namespace {

constexpr double kMaxLambda = 1e12;

// Number of successes = number of geometric waiting times that fit in m
// trials. Expected cost O(m * prob + 1); used for m * prob < 10.
std::uint64_t binomial_inversion(RngState& rng, std::uint64_t m, double prob) {
  const double log_q = std::log1p(-prob);
  const double md = static_cast<double>(m);
  double elapsed = 0.0;
  std::uint64_t successes = 0;
  while (true) {
    elapsed += std::ceil(std::log(rng.uniform_open01()) / log_q);
    if (elapsed > md) return successes;
    ++successes;
  }
}

// Hormann (1993), "The generation of binomial random variates", algorithm
// BTRS. Requires prob <= 1/2 and m * prob >= 10.
std::uint64_t binomial_btrs(RngState& rng, std::uint64_t m, double prob) {
  const double n = static_cast<double>(m);
  const double spq = std::sqrt(n * prob * (1.0 - prob));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * prob;
  const double c = n * prob + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = prob / (1.0 - prob);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double mode = std::floor((n + 1.0) * prob);
  // f_c(j) = log j! - (j + 1/2) log(j + 1) + (j + 1) - log sqrt(2 pi)
  auto fc = [](double j) { return special::stirling_error(j + 1.0); };
  const double mode_part = (mode + 0.5) * std::log((mode + 1.0) / (r * (n - mode + 1.0))) +
                           fc(mode) + fc(n - mode);

  while (true) {
    const double u = rng.uniform01() - 0.5;
    double v = rng.uniform01();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound = mode_part + (n + 1.0) * std::log((n - mode + 1.0) / (n - k + 1.0)) +
                         (k + 0.5) * std::log(r * (n - k + 1.0) / (k + 1.0)) - fc(k) - fc(n - k);
    if (v <= bound) return static_cast<std::uint64_t>(k);
  }
}

std::uint64_t poisson_multiplication(RngState& rng, double lambda) {
  const double limit = std::exp(-lambda);
  double prod = 1.0;
  std::uint64_t x = 0;
  while (true) {
    prod *= rng.uniform01();
    if (prod <= limit) return x;
    ++x;
  }
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS. Requires lambda >= 10.
std::uint64_t poisson_ptrs(RngState& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double log_inv_alpha = std::log(1.1239 + 1.1328 / (b - 3.4));
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  while (true) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    // Far beyond any representable pmf mass; also keeps the cast defined.
    if (k > 0x1.0p62) continue;
    const double lhs = std::log(v) + log_inv_alpha - std::log(a / (us * us) + b);
    if (lhs <= special::poisson_log_pmf(static_cast<std::uint64_t>(k), lambda)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

std::uint64_t binomial(RngState& rng, std::uint64_t m, double prob) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw ValidationError("binomial probability must lie in [0, 1]");
  }
  if (m == 0 || prob == 0.0) return 0;
  if (prob == 1.0) return m;
  const bool flip = prob > 0.5;
  const double p = flip ? 1.0 - prob : prob;
  const std::uint64_t x =
      static_cast<double>(m) * p < 10.0 ? binomial_inversion(rng, m, p) : binomial_btrs(rng, m, p);
  return flip ? m - x : x;
}

std::uint64_t poisson(RngState& rng, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("poisson rate must be finite and nonnegative");
  }
  if (lambda > kMaxLambda) throw ValidationError("poisson rate above 1e12 is not supported");
  if (lambda == 0.0) return 0;
  return lambda < 10.0 ? poisson_multiplication(rng, lambda) : poisson_ptrs(rng, lambda);
}

MultinomialSampler::MultinomialSampler(const Pmf& p) : conditional_(p.size()) {
  const auto probs = p.probs();
  std::vector<double> suffix(probs.size() + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t i = probs.size(); i-- > 0;) {
    acc.add(probs[i]);
    suffix[i] = acc.value();
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (suffix[i + 1] == 0.0 || suffix[i] == 0.0) {
      conditional_[i] = suffix[i] == 0.0 ? 0.0 : 1.0;
    } else {
      conditional_[i] = std::clamp(probs[i] / suffix[i], 0.0, 1.0);
    }
  }
}

void MultinomialSampler::sample_into(RngState& rng, std::uint64_t n,
                                     std::span<std::uint64_t> out) const noexcept {
  std::uint64_t remaining = n;
  const std::size_t k = conditional_.size();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const std::uint64_t c = remaining == 0 ? 0 : binomial(rng, remaining, conditional_[i]);
    out[i] = c;
    remaining -= c;
  }
  out[k - 1] = remaining;
}

Counts multinomial_counts(RngState& rng, const Pmf& p, std::uint64_t n) {
  std::vector<std::uint64_t> counts(p.size());
  MultinomialSampler(p).sample_into(rng, n, counts);
  return Counts(std::move(counts), n);
}

Counts poissonized_counts(RngState& rng, const Pmf& p, std::uint64_t n) {
  if (n == 0) throw ValidationError("poissonized sampling needs n >= 1");
  const double nd = static_cast<double>(n);
  std::vector<std::uint64_t> counts(p.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts[i] = poisson(rng, nd * p[i]);
    total += counts[i];
  }
  return Counts(std::move(counts), total);
}

CoupledPair coupled_pair(RngState& rng, std::uint64_t n, double prob) {
  if (!(prob > 0.0 && prob <= 1.0)) {
    throw ValidationError("coupling probability must lie in (0, 1]");
  }
  if (n == 0) throw ValidationError("coupling needs n >= 1");
  CoupledPair pair;
  pair.n_latent = poisson(rng, static_cast<double>(n));
  const std::uint64_t shared = std::min(pair.n_latent, n);
  const std::uint64_t gap = pair.n_latent > n ? pair.n_latent - n : n - pair.n_latent;
  pair.x = binomial(rng, shared, prob);
  pair.y = binomial(rng, gap, prob);
  if (pair.n_latent > n) {
    pair.m = pair.x;
    pair.m_prime = pair.x + pair.y;
  } else {
    pair.m = pair.x + pair.y;
    pair.m_prime = pair.x;
  }
  return pair;
}

}  // namespace klconc
