#include <doctest.h>

#include <cmath>
#include <set>

#include "klconc/error.hpp"
#include "klconc/rng.hpp"
#include "klconc/sampling.hpp"
#include "klconc/special.hpp"
#include "klconc/stats.hpp"

using namespace klconc;

namespace {

template <class Draw>
std::vector<std::uint64_t> histogram(std::uint64_t draws, std::uint64_t seed, Draw&& draw) {
  RngState rng(seed);
  std::vector<std::uint64_t> h;
  for (std::uint64_t i = 0; i < draws; ++i) stats::accumulate_histogram(h, draw(rng));
  return h;
}

stats::GofResult binomial_gof(std::uint64_t m, double p, std::uint64_t draws, std::uint64_t seed) {
  const auto h = histogram(draws, seed, [&](RngState& r) { return binomial(r, m, p); });
  return stats::chi_square_gof(h, [&](std::uint64_t x) { return special::binomial_pmf(x, m, p); }, m);
}

stats::GofResult poisson_gof(double lambda, std::uint64_t draws, std::uint64_t seed) {
  const auto h = histogram(draws, seed, [&](RngState& r) { return poisson(r, lambda); });
  return stats::chi_square_gof(h, [&](std::uint64_t x) { return special::poisson_pmf(x, lambda); },
                               std::numeric_limits<std::uint64_t>::max());
}

}  // namespace

TEST_CASE("rng is reproducible and derived streams differ") {
  RngState a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    (void)c();
  }
  CHECK(a == b);
  CHECK_FALSE(a == c);

  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    RngState r = derive_trial_rng(7, i);
    firsts.insert(r());
    RngState again = derive_trial_rng(7, i);
    CHECK(again == derive_trial_rng(7, i));
  }
  CHECK(firsts.size() == 1000);
  CHECK_FALSE(derive_trial_rng(7, 0) == derive_trial_rng(8, 0));
}

TEST_CASE("uniform helpers stay in range") {
  RngState r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    CHECK((u >= 0.0 && u < 1.0));
    const double v = r.uniform_open01();
    CHECK((v > 0.0 && v < 1.0));
  }
  std::vector<std::uint64_t> h;
  for (int i = 0; i < 100000; ++i) {
    const auto x = r.below(7);
    REQUIRE(x < 7);
    stats::accumulate_histogram(h, x);
  }
  const auto gof = stats::chi_square_gof(h, [](std::uint64_t) { return 1.0 / 7.0; }, 6);
  CHECK(gof.p_value > 1e-4);
}

TEST_CASE("binomial edge cases") {
  RngState r(3);
  CHECK(binomial(r, 0, 0.4) == 0);
  CHECK(binomial(r, 50, 0.0) == 0);
  CHECK(binomial(r, 50, 1.0) == 50);
  CHECK_THROWS_AS(binomial(r, 5, -0.1), ValidationError);
  CHECK_THROWS_AS(binomial(r, 5, 1.1), ValidationError);
  CHECK_THROWS_AS(binomial(r, 5, NAN), ValidationError);
  for (int i = 0; i < 1000; ++i) CHECK(binomial(r, 30, 0.7) <= 30);
}

TEST_CASE("binomial goodness of fit across regimes") {
  struct Case {
    std::uint64_t m;
    double p;
  };
  // Inversion, rejection and the p > 1/2 reflection.
  for (const Case c : {Case{10, 0.3}, Case{40, 0.2}, Case{200, 0.04}, Case{10000, 0.3}, Case{1000, 0.9},
                       Case{100000, 0.5}, Case{3, 0.99}}) {
    const auto gof = binomial_gof(c.m, c.p, 1'000'000, 17 + c.m);
    INFO("m=" << c.m << " p=" << c.p << " chi2=" << gof.chi2 << " df=" << gof.df);
    CHECK(gof.p_value >= 1e-3);
  }
}

TEST_CASE("poisson goodness of fit across regimes") {
  RngState r(5);
  CHECK(poisson(r, 0.0) == 0);
  CHECK_THROWS_AS(poisson(r, -1.0), ValidationError);
  CHECK_THROWS_AS(poisson(r, INFINITY), ValidationError);
  for (double lambda : {0.2, 4.0, 9.99, 10.0, 37.5, 1000.0, 250000.0}) {
    const auto gof = poisson_gof(lambda, 1'000'000, 29);
    INFO("lambda=" << lambda << " chi2=" << gof.chi2 << " df=" << gof.df);
    CHECK(gof.p_value >= 1e-3);
  }
}

TEST_CASE("poisson mean at large rates") {
  for (double lambda : {1e6, 1e9}) {
    RngState r(9);
    stats::Moments m;
    for (int i = 0; i < 100000; ++i) m.push(static_cast<double>(poisson(r, lambda)));
    CHECK(std::abs(m.mean - lambda) <= 4.0 * std::sqrt(lambda / 1e5));
    CHECK(m.variance() == doctest::Approx(lambda).epsilon(0.02));
  }
}

TEST_CASE("Kolmogorov distance over 1e7 draws") {
  const auto b = histogram(10'000'000, 101, [](RngState& r) { return binomial(r, 10000, 0.3); });
  CHECK(stats::kolmogorov_distance(b, [](std::uint64_t x) { return special::binomial_pmf(x, 10000, 0.3); }, 10000) <
        1e-3);
  const auto s = histogram(10'000'000, 102, [](RngState& r) { return binomial(r, 20, 0.4); });
  CHECK(stats::kolmogorov_distance(s, [](std::uint64_t x) { return special::binomial_pmf(x, 20, 0.4); }, 20) < 1e-3);
  const auto p = histogram(10'000'000, 103, [](RngState& r) { return poisson(r, 4.0); });
  CHECK(stats::kolmogorov_distance(p, [](std::uint64_t x) { return special::poisson_pmf(x, 4.0); }, 1000) < 1e-3);
  const auto q = histogram(10'000'000, 104, [](RngState& r) { return poisson(r, 100.0); });
  CHECK(stats::kolmogorov_distance(q, [](std::uint64_t x) { return special::poisson_pmf(x, 100.0); }, 10000) < 1e-3);
}

TEST_CASE("multinomial counts") {
  RngState r(4);
  const Pmf p = make_pmf(std::vector<double>{0.5, 0.0, 0.25, 0.25});
  stats::Moments first;
  for (int i = 0; i < 20000; ++i) {
    const Counts c = multinomial_counts(r, p, 100);
    std::uint64_t s = 0;
    for (auto x : c.counts()) s += x;
    REQUIRE(s == 100);
    CHECK(c[1] == 0);
    first.push(static_cast<double>(c[0]));
  }
  CHECK(std::abs(first.mean - 50.0) < 4 * std::sqrt(25.0 / 20000));
  CHECK(first.variance() == doctest::Approx(25.0).epsilon(0.05));

  const Counts one = multinomial_counts(r, uniform_pmf(1), 9);
  CHECK(one[0] == 9);
  const Counts none = multinomial_counts(r, uniform_pmf(3), 0);
  CHECK(none.total() == 0);
}

TEST_CASE("poissonized counts") {
  RngState r(8);
  const Pmf p = uniform_pmf(5);
  stats::Moments total;
  for (int i = 0; i < 20000; ++i) {
    const Counts c = poissonized_counts(r, p, 50);
    std::uint64_t s = 0;
    for (auto x : c.counts()) s += x;
    REQUIRE(s == c.total());
    total.push(static_cast<double>(c.total()));
  }
  CHECK(std::abs(total.mean - 50.0) < 4 * std::sqrt(50.0 / 20000));
  CHECK_THROWS_AS(poissonized_counts(r, p, 0), ValidationError);
}

TEST_CASE("coupled pair structure") {
  RngState r(12);
  for (int i = 0; i < 50000; ++i) {
    const auto c = coupled_pair(r, 20, 0.4);
    if (c.n_latent <= 20) {
      CHECK(c.m - c.m_prime == c.y);
    } else {
      CHECK(c.m_prime - c.m == c.y);
    }
    CHECK(c.m <= 20);
  }
  for (int i = 0; i < 1000; ++i) {
    const auto c = coupled_pair(r, 30, 1.0);
    CHECK(c.m == 30);
    CHECK(c.m_prime == c.n_latent);
  }
  CHECK_THROWS_AS(coupled_pair(r, 10, 0.0), ValidationError);
  CHECK_THROWS_AS(coupled_pair(r, 10, 1.5), ValidationError);
  CHECK_THROWS_AS(coupled_pair(r, 0, 0.5), ValidationError);
}
