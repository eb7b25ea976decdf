#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "klconc/bounds.hpp"
#include "klconc/checks.hpp"
#include "klconc/error.hpp"

using namespace klconc;

TEST_CASE("exceedance threshold") {
  CHECK(exceedance_threshold(0.1, 10000) == doctest::Approx(0.1 + 3 * std::sqrt(0.09 / 10000)).epsilon(1e-15));
}

TEST_CASE("variance check at small scale") {
  const auto r = verify_variance_lb(4, 40, 4000, 3, 0);
  CHECK(r.lower_bound == bounds::variance_lower_bound(4, 40));
  CHECK(r.pass);
  CHECK(r.ratio == doctest::Approx(r.empirical_var / r.lower_bound));
  CHECK(r.ci_low <= r.empirical_var);
  CHECK(r.empirical_var <= r.ci_high);
  CHECK_THROWS_AS(verify_variance_lb(10, 50, 100, 1, 0), PreconditionError);

  const auto again = verify_variance_lb(4, 40, 4000, 3, 3);
  CHECK(again.empirical_var == r.empirical_var);
  CHECK(again.ci_low == r.ci_low);
  CHECK(again.ci_high == r.ci_high);
}

TEST_CASE("deviation bound check") {
  for (Center c : {Center::Mean, Center::Median}) {
    const auto r = verify_thm_bound(5, 200, 2000, 0.1, 11, c, 0);
    CHECK(r.pass);
    CHECK(r.exceed_count == 0);
    CHECK(r.threshold == exceedance_threshold(0.1, 2000));
  }
  CHECK_THROWS_AS(verify_thm_bound(5, 200, 100, 0.0, 1), ValidationError);
}

TEST_CASE("poisson tail check") {
  const auto r = poisson_tail_check(10.0, 0.5, 100000, 4, 0);
  CHECK(r.pass);
  CHECK(r.fail_frac <= r.threshold);
  CHECK_THROWS_AS(poisson_tail_check(0.0, 0.5, 10, 1), ValidationError);
  CHECK_THROWS_AS(poisson_tail_check(1.0, 1.5, 10, 1), ValidationError);
  CHECK_THROWS_AS(poisson_tail_check(1.0, 0.5, 0, 1), ValidationError);
}

TEST_CASE("coupling diagnostics") {
  const auto r = coupling_diagnostic(50, 0.3, 50000, 5, 0);
  CHECK(r.bound == bounds::coupling_gap_bound(50, 0.3));
  CHECK(r.ci_low <= r.est_gap);
  CHECK(r.est_gap <= r.ci_high);
  CHECK(r.pass);

  CHECK_THROWS_AS(marginal_gof(20, 0.4, 1000, 1), ValidationError);
  const auto m = marginal_gof(20, 0.4, 100000, 6, 0);
  CHECK(m.pass);
  CHECK(m.m.df > 5);
}

TEST_CASE("expectation check") {
  const auto r = expected_kl_check(uniform_pmf(5), 200, 5000, 8, 0);
  CHECK(r.ceiling == doctest::Approx(4.0 / 200));
  CHECK(r.pass);
  CHECK(r.mean_kl < r.ceiling);
}

TEST_CASE("suites") {
  const auto names = suite_names();
  for (const char* s : {"all", "facts", "variance", "thm", "poisson-tail", "coupling", "marginals", "expectation"}) {
    CHECK(std::find(names.begin(), names.end(), s) != names.end());
  }
  CHECK_THROWS_AS(run_suite("nope", {}), ValidationError);

  const auto facts = run_fact_checks();
  CHECK(facts.size() == 7);
  for (const auto& f : facts) {
    INFO(f.anchor << " " << f.detail);
    CHECK(f.pass);
  }

  SuiteOptions o;
  o.k = 5;
  o.n = 100;
  o.reps = 3000;
  const auto v = run_suite("variance", o);
  REQUIRE(v.size() == 1);
  CHECK(v[0].pass);
  CHECK(v[0].suite == "variance");

  o = {};
  o.lambda = 3.0;
  o.delta = 0.2;
  o.reps = 10000;
  const auto t = run_suite("poisson-tail", o);
  REQUIRE(t.size() == 1);
  CHECK(t[0].pass);
}
