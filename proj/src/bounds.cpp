#include "klconc/bounds.hpp"

#include <cmath>
#include <string>

#include "klconc/error.hpp"
#include "klconc/special.hpp"
#include "klconc/summation.hpp"

namespace klconc::bounds {
namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
}

void require_prob(double prob) {
  if (!(prob > 0.0 && prob <= 1.0)) throw ValidationError("probability must lie in (0, 1]");
}

}  // namespace

BoundInputs BoundInputs::make(std::uint64_t k, std::uint64_t n, double delta) {
  if (k == 0) throw ValidationError("k must be >= 1");
  if (n == 0) throw ValidationError("n must be >= 1");
  require_delta(delta);
  return BoundInputs{k, n, delta};
}

double mcdiarmid_deviation(double c_inf, std::uint64_t n, double delta) {
  require_delta(delta);
  if (!(c_inf > 0.0) || !std::isfinite(c_inf)) throw ValidationError("c_inf must be positive");
  if (n == 0) throw ValidationError("n must be >= 1");
  const double nd = static_cast<double>(n);
  return std::sqrt(nd * c_inf * c_inf / 2.0 * std::log(1.0 / delta));
}

double thm_kl_bound(const BoundInputs& b) {
  const auto valid = BoundInputs::make(b.k, b.n, b.delta);
  const double k = static_cast<double>(valid.k);
  const double n = static_cast<double>(valid.n);
  const double log_term = std::log(4.0 * k / valid.delta);
  return 6.0 * std::sqrt(k * std::pow(log_term, 5)) / n + gamma_term(valid.k, valid.n);
}

double bgpv_deviation(const BoundInputs& b) {
  const auto valid = BoundInputs::make(b.k, b.n, b.delta);
  if (valid.n < 2) throw PreconditionError("bgpv deviation needs n >= 2 (log n > 0)");
  const double k = static_cast<double>(valid.k);
  const double n = static_cast<double>(valid.n);
  return k / n * std::log(n) * std::log(k / valid.delta);
}

double variance_lower_bound(std::uint64_t k, std::uint64_t n) {
  if (k == 0 || n == 0) throw ValidationError("k and n must be >= 1");
  if (n < 10 * k) throw PreconditionError("variance bound needs n >= 10k");
  const double nd = static_cast<double>(n);
  return static_cast<double>(k) / (32.0 * nd * nd);
}

double heuristic_std(std::uint64_t k, std::uint64_t n) {
  if (k == 0 || n == 0) throw ValidationError("k and n must be >= 1");
  return std::sqrt(static_cast<double>(k) / 2.0) / static_cast<double>(n);
}

double poisson_tail_radius(std::uint64_t n_obs, double delta) {
  require_delta(delta);
  return 6.0 * std::sqrt(static_cast<double>(n_obs) + 1.0) * std::log(2.0 / delta);
}

double gamma_term(std::uint64_t k, std::uint64_t n) {
  if (k == 0 || n == 0) throw ValidationError("k and n must be >= 1");
  const double nd = static_cast<double>(n);
  return 311.0 / nd + 160.0 * static_cast<double>(k) / (nd * std::sqrt(nd));
}

double clip_threshold_alpha(const BoundInputs& b) {
  const auto valid = BoundInputs::make(b.k, b.n, b.delta);
  const double l = std::log(4.0 * static_cast<double>(valid.k) / valid.delta);
  return 36.0 * l * l / static_cast<double>(valid.n);
}

double binom_inv_moment(std::uint64_t m, double prob) {
  require_prob(prob);
  const double m1 = static_cast<double>(m) + 1.0;
  // 1 - (1-p)^{m+1} = -expm1((m+1) log1p(-p)); log1p(-1) = -inf gives 1.
  const double mass = -std::expm1(m1 * std::log1p(-prob));
  return mass / (prob * m1);
}

double binom_inv_moment2_bound(std::uint64_t m, double prob) {
  require_prob(prob);
  const double md = static_cast<double>(m);
  return 1.0 / (prob * prob * (md + 1.0) * (md + 2.0));
}

double binom_inv_moment2_exact(std::uint64_t m, double prob) {
  require_prob(prob);
  CompensatedSum sum;
  for (std::uint64_t x = 0; x <= m; ++x) {
    const double xd = static_cast<double>(x);
    sum.add(special::binomial_pmf(x, m, prob) / ((xd + 1.0) * (xd + 2.0)));
  }
  return sum.value();
}

double poisson_pmf_at_mean(std::uint64_t n) {
  if (n == 0) throw ValidationError("n must be >= 1");
  return special::poisson_pmf(n, static_cast<double>(n));
}

double var_product_split(std::uint64_t n0) {
  const double x = static_cast<double>(n0);
  return (x * x - x) / 8.0;
}

double coupling_gap_bound(std::uint64_t n, double prob) {
  require_prob(prob);
  if (n == 0) throw ValidationError("n must be >= 1");
  const double nd = static_cast<double>(n);
  return 311.0 / nd + 160.0 / (nd * std::sqrt(nd) * prob);
}

}  // namespace klconc::bounds
