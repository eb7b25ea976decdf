#include <doctest.h>

#include <cmath>
#include <random>

#include "identities.hpp"
#include "klconc/dist.hpp"
#include "klconc/error.hpp"
#include "klconc/losses.hpp"

using namespace klconc;

namespace {

Pmf pmf(std::vector<double> w) { return make_pmf(w); }

}  // namespace

TEST_CASE("kl_divergence basics") {
  const Pmf p = pmf({0.5, 0.5});
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(pmf({1.0, 0.0}), pmf({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // p_i = 0 skips the term even where q_i = 0.
  CHECK(kl_divergence(pmf({1.0, 0.0}), pmf({1.0, 0.0})) == 0.0);
  CHECK(std::isinf(kl_divergence(pmf({0.5, 0.5}), pmf({1.0, 0.0}))));
  CHECK_THROWS_AS(kl_divergence(pmf({0.5, 0.5}), pmf({1.0})), ValidationError);
}

TEST_CASE("kl_divergence against a long double oracle") {
  std::mt19937_64 gen(3);
  for (int c = 0; c < 200; ++c) {
    const Pmf p = identities::random_pmf(gen, 50, 0.1);
    const Pmf q = identities::random_pmf(gen, 50, 0.0);
    long double ref = 0.0L;
    for (std::size_t i = 0; i < 50; ++i) {
      if (p[i] > 0) ref += static_cast<long double>(p[i]) * std::log(static_cast<long double>(p[i]) / q[i]);
    }
    CHECK(std::abs(kl_divergence(p, q) - ref) <= 1e-13 * (1 + ref));
  }
}

TEST_CASE("kl_tilde worked values") {
  for (std::uint64_t k : {1ULL, 2ULL, 7ULL}) {
    const Pmf u = uniform_pmf(k);
    CHECK(kl_tilde(u, u, k, k) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  }
  CHECK(kl_tilde(pmf({1.0, 0.0}), pmf({0.5, 0.5}), 2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::isinf(kl_tilde(pmf({0.5, 0.5}), pmf({1.0, 0.0}), 4, 2)));
  CHECK_THROWS_AS(kl_tilde(pmf({0.5, 0.5}), pmf({0.5, 0.5}), 4, 3), ValidationError);
}

TEST_CASE("fused kl_tilde matches the three-term form on measures") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> mass(0.2, 3.0);
  for (int c = 0; c < 2000; ++c) {
    const std::size_t k = 1 + c % 40;
    const std::uint64_t n = identities::log_uniform(gen, 1, 1e5);
    const Pmf p = identities::random_pmf(gen, k, 0.1);
    const Pmf base = identities::random_pmf(gen, k, 0.0);
    const double m = mass(gen);
    std::vector<double> w(base.probs().begin(), base.probs().end());
    for (auto& x : w) x *= m;
    const Measure q(w);
    const double fused = kl_tilde(p, q, n, k);
    const double three = kl_tilde_three_term(p, q, n, k);
    // Three-term evaluation loses accuracy relative to its largest term.
    const double scale = fused + (static_cast<double>(n + k) / n) * m + 2.0;
    CHECK(std::abs(fused - three) <= 1e-12 * scale);
    CHECK(fused >= 0.0);
  }
}

TEST_CASE("kl_tilde_shift") {
  CHECK(kl_tilde_shift(5, 5) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-15));
  CHECK(kl_tilde_shift(1, 1) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-15));
  double prev = kl_tilde_shift(10, 10);
  for (std::uint64_t n = 11; n < 5000; n += 7) {
    const double s = kl_tilde_shift(n, 10);
    CHECK(s < prev);
    CHECK(s > 0.0);
    prev = s;
  }
  // Long double reference at large n where x - log(1 + x) cancels.
  const long double x = 10.0L / 1e9L;
  CHECK(kl_tilde_shift(1'000'000'000, 10) == doctest::Approx(static_cast<double>(x - std::log1p(x))).epsilon(1e-12));
}

TEST_CASE("pseudo_kl_term") {
  CHECK(pseudo_kl_term(0.0, 3, 4) == 1.0);
  CHECK(pseudo_kl_term(0.25, 0, 4) == doctest::Approx(0.0).epsilon(1e-300));
  CHECK(pseudo_kl_term(0.5, 1, 4) == doctest::Approx(0.5 * std::log(1.0) + 0.5 - 0.5));
  CHECK(pseudo_kl_term(0.5, 0, 4) == doctest::Approx(0.5 * std::log(2.0) + 0.25 - 0.5).epsilon(1e-14));
}

TEST_CASE("lr_distance") {
  const Pmf p = pmf({1.0, 0.0, 0.0});
  const Pmf q = pmf({0.0, 0.5, 0.5});
  CHECK(lr_distance(p, q, 1.0) == 2.0);
  CHECK(lr_distance(p, q, 2.0) == doctest::Approx(std::sqrt(1.5)));
  CHECK(lr_distance(p, q, INFINITY) == 1.0);
  CHECK(lr_distance(p, q, 3.0) == doctest::Approx(std::cbrt(1.25)));
  CHECK_THROWS_AS(lr_distance(p, q, 0.5), ValidationError);
  CHECK_THROWS_AS(lr_distance(p, q, NAN), ValidationError);
}

TEST_CASE("identity property tests") {
  const auto shift = identities::shift_identity(101, 10'000);
  INFO("shift worst " << shift.worst);
  CHECK(shift.violations == 0);

  const auto decomposition = identities::uniform_decomposition(102, 10'000);
  INFO("decomposition worst " << decomposition.worst);
  CHECK(decomposition.violations == 0);

  const auto terms = identities::per_term_nonnegativity(103, 10'000);
  CHECK(terms.violations == 0);

  const auto sums = identities::pseudo_sum_identity(104, 10'000);
  INFO("pseudo sum worst " << sums.worst);
  CHECK(sums.violations == 0);
}
