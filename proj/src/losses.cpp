#include "klconc/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "klconc/error.hpp"
#include "klconc/special.hpp"
#include "klconc/summation.hpp"

namespace klconc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ValidationError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) noexcept {
  CompensatedSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    const double r = p[i] / q[i];
    // p - q is exact near r = 1, where log(r) would keep only the rounding of r.
    sum.add(p[i] * (r > 0.5 && r < 2.0 ? std::log1p((p[i] - q[i]) / q[i]) : std::log(r)));
  }
  return sum.value();
}

double kl_divergence(const Pmf& p, const Measure& q) {
  require_same_length(p.size(), q.size());
  return kl_divergence(p.probs(), q.weights());
}

double kl_tilde(const Pmf& p, const Measure& q, std::uint64_t n, std::uint64_t k) {
  require_same_length(p.size(), q.size());
  if (n == 0 || k == 0) throw ValidationError("kl_tilde needs n >= 1 and k >= 1");
  require_same_length(p.size(), static_cast<std::size_t>(k));
  const double nd = static_cast<double>(n);
  const double kn = static_cast<double>(k) / nd;
  // Per symbol: p log(p / (s q)) + s q - p = p * (r - 1 - log r) with
  // s = 1 + k/n and r = s q / p. r - 1 is formed as ((q - p) + (k/n) q) / p
  // so the k/n part keeps its own precision when it is small.
  CompensatedSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      sum.add(q[i] + kn * q[i]);
      continue;
    }
    if (q[i] == 0.0) return kInf;
    sum.add(p[i] * special::x_minus_log1p(std::fma(kn, q[i], q[i] - p[i]) / p[i]));
  }
  return sum.value();
}

double kl_tilde_three_term(const Pmf& p, const Measure& q, std::uint64_t n, std::uint64_t k) {
  require_same_length(p.size(), q.size());
  if (n == 0 || k == 0) throw ValidationError("kl_tilde needs n >= 1 and k >= 1");
  require_same_length(p.size(), static_cast<std::size_t>(k));
  const double kl = kl_divergence(p, q);
  if (std::isinf(kl)) return kl;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return kl + (nd + kd) / nd * q.total() + (std::log(nd / (nd + kd)) - 1.0) * compensated_sum(p.probs());
}

double kl_tilde_shift(std::uint64_t n, std::uint64_t k) {
  if (n == 0 || k == 0) throw ValidationError("kl_tilde_shift needs n >= 1 and k >= 1");
  // x - log x - 1 with x = 1 + k/n.
  return special::x_minus_log1p(static_cast<double>(k) / static_cast<double>(n));
}

double pseudo_kl_term(double p_i, std::uint64_t count, std::uint64_t n) {
  if (n == 0) throw ValidationError("pseudo_kl_term needs n >= 1");
  const double nd = static_cast<double>(n);
  const double c1 = static_cast<double>(count) + 1.0;
  if (p_i == 0.0) return c1 / nd;
  const double np = nd * p_i;
  return p_i * special::x_minus_log1p(-std::fma(nd, p_i, -c1) / np);
}

double lr_distance(const Pmf& p, const Pmf& q, double r) {
  require_same_length(p.size(), q.size());
  if (std::isnan(r) || r < 1.0) throw ValidationError("l_r distance needs r >= 1");
  if (std::isinf(r)) {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
    return m;
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::abs(p[i] - q[i]);
    sum.add(r == 1.0 ? d : (r == 2.0 ? d * d : std::pow(d, r)));
  }
  const double s = sum.value();
  if (r == 1.0) return s;
  if (r == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / r);
}

}  // namespace klconc
