#include "klconc/special.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace klconc::special {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lgamma cancels against the log terms; long double keeps ~16 digits of the
// difference for n <= 15.
double small_stirling(double n) noexcept {
  const long double nl = n;
  return static_cast<double>(std::lgamma(nl + 1.0L) - (nl + 0.5L) * std::log(nl) + nl -
                             0.918938533204672741780329736406L);
}

// stirling_error(n) for n = 0.5, 1, 1.5, ..., 15 computed once from lgamma.
// Above 15 the asymptotic series is accurate to full double precision.
const std::array<double, 31>& small_stirling_table() {
  static const std::array<double, 31> table = [] {
    std::array<double, 31> t{};
    t[0] = 0.0;
    for (int i = 1; i <= 30; ++i) {
      const double n = 0.5 * i;
      t[i] = small_stirling(n);
    }
    return t;
  }();
  return table;
}

}  // namespace

double stirling_error(double n) noexcept {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    const double twice = n + n;
    if (twice == std::floor(twice)) return small_stirling_table()[static_cast<int>(twice)];
    return small_stirling(n);
  }
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

double deviance_term(double x, double np) noexcept {
  if (x == 0.0) return np;
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
  }
  return x * std::log(x / np) + np - x;
}

double x_minus_log1p(double x) noexcept {
  if (std::abs(x) < 0.01) {
    // x^2/2 - x^3/3 + x^4/4 - ...
    double term = x * x;
    double sum = 0.0;
    for (int j = 2; j < 40; ++j) {
      const double next = sum + ((j % 2 == 0) ? term / j : -term / j);
      if (next == sum) break;
      sum = next;
      term *= x;
    }
    return sum;
  }
  const double r = x - std::log1p(x);
  return r > 0.0 ? r : 0.0;
}

double poisson_log_pmf(std::uint64_t x, double lambda) noexcept {
  if (lambda == 0.0) return x == 0 ? 0.0 : -kInf;
  if (x == 0) return -lambda;
  const double xd = static_cast<double>(x);
  return -stirling_error(xd) - deviance_term(xd, lambda) - 0.5 * std::log(2.0 * M_PI * xd);
}

double poisson_pmf(std::uint64_t x, double lambda) noexcept {
  return std::exp(poisson_log_pmf(x, lambda));
}

double binomial_log_pmf(std::uint64_t x, std::uint64_t m, double prob) noexcept {
  if (x > m) return -kInf;
  const double q = 1.0 - prob;
  if (prob == 0.0) return x == 0 ? 0.0 : -kInf;
  if (prob == 1.0) return x == m ? 0.0 : -kInf;
  const double md = static_cast<double>(m);
  if (x == 0) return md * std::log1p(-prob);
  if (x == m) return md * std::log(prob);
  const double xd = static_cast<double>(x);
  const double yd = md - xd;
  const double lc = stirling_error(md) - stirling_error(xd) - stirling_error(yd) -
                    deviance_term(xd, md * prob) - deviance_term(yd, md * q);
  return lc + 0.5 * std::log(md / (2.0 * M_PI * xd * yd));
}

double binomial_pmf(std::uint64_t x, std::uint64_t m, double prob) noexcept {
  return std::exp(binomial_log_pmf(x, m, prob));
}

}  // namespace klconc::special
