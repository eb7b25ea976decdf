#include <doctest.h>

#include <cmath>
#include <random>

#include "klconc/error.hpp"
#include "klconc/parallel.hpp"
#include "klconc/stats.hpp"

using namespace klconc;
using namespace klconc::stats;

TEST_CASE("Moments match a two-pass long double oracle") {
  std::mt19937_64 gen(1);
  std::lognormal_distribution<double> d(-9.0, 1.0);
  std::vector<double> xs(100'000);
  for (auto& x : xs) x = 1e3 + d(gen);  // large offset, tiny spread
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  long double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = static_cast<double>(ss / (xs.size() - 1));

  Moments m;
  for (double x : xs) m.push(x);
  CHECK(m.count == xs.size());
  CHECK(m.mean == doctest::Approx(static_cast<double>(mean)).epsilon(1e-14));
  CHECK(m.variance() == doctest::Approx(var).epsilon(1e-9));

  const Moments blocked = moments_of(xs, 1024);
  CHECK(blocked.mean == doctest::Approx(static_cast<double>(mean)).epsilon(1e-14));
  CHECK(blocked.variance() == doctest::Approx(var).epsilon(1e-9));
}

TEST_CASE("Moments edge cases and merge") {
  Moments empty;
  CHECK(empty.variance() == 0.0);
  Moments one;
  one.push(3.0);
  CHECK(one.variance() == 0.0);
  CHECK(Moments::merge(empty, one).mean == 3.0);
  CHECK(Moments::merge(one, empty).count == 1);

  Moments a, b, all;
  for (int i = 0; i < 10; ++i) {
    a.push(i);
    all.push(i);
  }
  for (int i = 10; i < 25; ++i) {
    b.push(i * 0.5);
    all.push(i * 0.5);
  }
  const Moments ab = Moments::merge(a, b);
  CHECK(ab.count == all.count);
  CHECK(ab.mean == doctest::Approx(all.mean).epsilon(1e-15));
  CHECK(ab.variance() == doctest::Approx(all.variance()).epsilon(1e-14));
  CHECK_THROWS_AS(moments_of(std::vector<double>{1.0}, 0), ValidationError);
}

TEST_CASE("streamed blocks reduce exactly like the buffered path") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> xs(10'000);
  for (auto& x : xs) x = d(gen);
  for (unsigned threads : {1u, 3u, 8u}) {
    const auto parts = run_blocks(xs.size(), threads, [&](std::uint64_t b, std::uint64_t e) {
      Moments m;
      for (auto i = b; i < e; ++i) m.push(xs[i]);
      return m;
    });
    const Moments streamed = merge_pairwise(parts);
    const Moments buffered = moments_of(xs, kTrialBlock);
    CHECK(streamed.mean == buffered.mean);
    CHECK(streamed.m2 == buffered.m2);
  }
}

TEST_CASE("run_blocks propagates exceptions") {
  CHECK_THROWS_AS(run_blocks(5000, 4,
                             [](std::uint64_t b, std::uint64_t) -> int {
                               if (b >= 2048) throw ValidationError("boom");
                               return 0;
                             }),
                  ValidationError);
  CHECK(run_blocks(0, 4, [](std::uint64_t, std::uint64_t) { return 1; }).empty());
}

TEST_CASE("nearest-rank quantiles") {
  std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(exact_quantile(v, 0.5) == 3);
  CHECK(exact_quantile(v, 1.0) == 5);
  CHECK(exact_quantile(v, 0.2) == 1);
  CHECK(exact_quantile(v, 0.21) == 2);
  std::vector<double> empty;
  CHECK_THROWS_AS(exact_quantile(empty, 0.5), ValidationError);
  CHECK_THROWS_AS(exact_quantile(v, 0.0), ValidationError);
}

TEST_CASE("chi-square survival function") {
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(chi_square_sf(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(chi_square_sf(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(chi_square_sf(1.0, 0.0), ValidationError);
}

TEST_CASE("goodness of fit") {
  // Fair die, perfect counts.
  const std::vector<std::uint64_t> perfect{100, 100, 100, 100, 100, 100};
  auto die = [](std::uint64_t x) { return x < 6 ? 1.0 / 6.0 : 0.0; };
  auto r = chi_square_gof(perfect, die, 5);
  CHECK(r.chi2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.df == 5);
  CHECK(r.p_value == doctest::Approx(1.0));

  // Hand-computed statistic.
  const std::vector<std::uint64_t> skew{120, 80, 100, 100, 100, 100};
  r = chi_square_gof(skew, die, 5);
  CHECK(r.chi2 == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(chi_square_sf(8.0, 5)).epsilon(1e-12));

  // Bins with small expectation merge until each reaches 5.
  const std::vector<std::uint64_t> few{3, 3, 3, 3};
  auto quarter = [](std::uint64_t x) { return x < 4 ? 0.25 : 0.0; };
  r = chi_square_gof(few, quarter, 3);
  CHECK(r.bins == 2);

  // A draw outside the support is an immediate rejection.
  const std::vector<std::uint64_t> outside{10, 10, 10, 10, 10, 10, 0, 1};
  r = chi_square_gof(outside, die, 5);
  CHECK(std::isinf(r.chi2));
  CHECK(r.p_value == 0.0);

  CHECK_THROWS_AS(chi_square_gof(std::vector<std::uint64_t>{0, 0}, die, 5), ValidationError);
}

TEST_CASE("Kolmogorov distance and histograms") {
  std::vector<std::uint64_t> h;
  for (std::uint64_t v : {0, 1, 1, 3}) accumulate_histogram(h, v);
  CHECK(h == std::vector<std::uint64_t>{1, 2, 0, 1});
  auto uniform4 = [](std::uint64_t x) { return x < 4 ? 0.25 : 0.0; };
  // Empirical CDF 0.25, 0.75, 0.75, 1 against 0.25, 0.5, 0.75, 1.
  CHECK(kolmogorov_distance(h, uniform4, 3) == doctest::Approx(0.25));
}
