#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "klconc/special.hpp"

using namespace klconc::special;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("stirling_error against a 50-digit lgamma") {
  const Big log_sqrt_2pi = log(2 * boost::math::constants::pi<Big>()) / 2;
  for (double n : {1.0, 1.5, 2.0, 7.5, 14.5, 15.0, 15.5, 16.0, 30.0, 100.0, 1e4, 1e8}) {
    const Big nb = n;
    const Big ref = boost::math::lgamma(nb + 1) - (nb + Big(0.5)) * log(nb) + nb - log_sqrt_2pi;
    CHECK(rel(stirling_error(n), ref.convert_to<double>()) < 1e-13);
  }
}

TEST_CASE("x_minus_log1p is accurate and nonnegative") {
  for (double x : {-0.9, -0.5, -0.01, -1e-3, -1e-8, 0.0, 1e-12, 1e-6, 5e-3, 0.0099, 0.0101, 0.5, 3.0, 1e6}) {
    const Big xb = x;
    const Big ref = xb - boost::math::log1p(xb);
    CHECK(x_minus_log1p(x) >= 0.0);
    if (x != 0.0) CHECK(rel(x_minus_log1p(x), ref.convert_to<double>()) < 1e-13);
  }
  CHECK(x_minus_log1p(0.0) == 0.0);
}

TEST_CASE("deviance_term matches direct evaluation") {
  for (double np : {0.5, 10.0, 1000.0}) {
    for (double x : {0.0, 1.0, np * 0.5, np * 0.999, np * 1.2, np * 3}) {
      const long double xl = x, m = np;
      const long double ref = x == 0 ? m : xl * std::log(xl / m) + m - xl;
      CHECK(std::abs(deviance_term(x, np) - static_cast<double>(ref)) <= 1e-12 * (1.0 + std::abs(static_cast<double>(ref))));
    }
  }
}

TEST_CASE("poisson pmf against boost") {
  for (double lambda : {0.1, 1.0, 7.5, 100.0, 1e4}) {
    boost::math::poisson_distribution<double> d(lambda);
    const auto hi = static_cast<std::uint64_t>(lambda + 10 * std::sqrt(lambda) + 10);
    for (std::uint64_t x = 0; x <= hi; ++x) {
      const double ref = boost::math::pdf(d, static_cast<double>(x));
      if (ref < 1e-280) continue;
      CHECK(rel(poisson_pmf(x, lambda), ref) < 1e-11);
    }
  }
  CHECK(poisson_pmf(0, 0.0) == 1.0);
  CHECK(poisson_pmf(3, 0.0) == 0.0);
}

TEST_CASE("binomial pmf against boost") {
  for (std::uint64_t m : {1ULL, 20ULL, 200ULL, 10000ULL}) {
    for (double p : {0.01, 0.3, 0.5, 0.97}) {
      boost::math::binomial_distribution<double> d(static_cast<double>(m), p);
      for (std::uint64_t x = 0; x <= m; ++x) {
        const double ref = boost::math::pdf(d, static_cast<double>(x));
        if (ref < 1e-280) continue;
        CHECK(rel(binomial_pmf(x, m, p), ref) < 1e-11);
      }
    }
  }
  CHECK(binomial_pmf(0, 5, 0.0) == 1.0);
  CHECK(binomial_pmf(5, 5, 1.0) == 1.0);
  CHECK(binomial_pmf(4, 5, 1.0) == 0.0);
  CHECK(binomial_pmf(6, 5, 0.5) == 0.0);
}
