#include "klconc/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "klconc/bounds.hpp"
#include "klconc/error.hpp"
#include "klconc/harness.hpp"
#include "klconc/parallel.hpp"
#include "klconc/rng.hpp"
#include "klconc/sampling.hpp"
#include "klconc/special.hpp"
#include "klconc/summation.hpp"

namespace klconc {
namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile
constexpr std::uint64_t kBootstrapSalt = 0xb0075712a9b1e5d3ULL;
constexpr std::uint64_t kBootstrapBlock = 16;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
}

void require_reps(std::uint64_t reps) {
  if (reps == 0) throw ValidationError("reps must be >= 1");
}

std::vector<std::uint64_t> merge_histograms(const std::vector<std::vector<std::uint64_t>>& parts) {
  std::vector<std::uint64_t> out;
  for (const auto& h : parts) {
    if (h.size() > out.size()) out.resize(h.size(), 0);
    for (std::size_t i = 0; i < h.size(); ++i) out[i] += h[i];
  }
  return out;
}

}  // namespace

double exceedance_threshold(double delta, std::uint64_t reps) {
  return delta + 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(reps));
}

VarianceReport verify_variance_lb(std::uint64_t k, std::uint64_t n, std::uint64_t reps,
                                  std::uint64_t seed, unsigned threads) {
  require_reps(reps);
  VarianceReport r;
  r.k = k;
  r.n = n;
  r.reps = reps;
  r.lower_bound = bounds::variance_lower_bound(k, n);

  const auto losses = kl_trial_losses(uniform_pmf(static_cast<std::size_t>(k)), n, reps, 1.0, seed, threads);
  r.empirical_var = stats::moments_of(losses, kTrialBlock).variance();
  r.ratio = r.empirical_var / r.lower_bound;

  const std::uint64_t boot_seed = mix64(seed) ^ kBootstrapSalt;
  const auto parts = run_blocks(
      kBootstrapResamples, threads,
      [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> vars;
        vars.reserve(end - begin);
        for (std::uint64_t b = begin; b < end; ++b) {
          RngState rng = derive_trial_rng(boot_seed, b);
          stats::Moments m;
          for (std::uint64_t i = 0; i < reps; ++i) m.push(losses[rng.below(reps)]);
          vars.push_back(m.variance());
        }
        return vars;
      },
      kBootstrapBlock);
  std::vector<double> vars;
  vars.reserve(kBootstrapResamples);
  for (const auto& p : parts) vars.insert(vars.end(), p.begin(), p.end());
  r.ci_low = stats::exact_quantile(vars, 0.025);
  r.ci_high = stats::exact_quantile(vars, 0.975);
  r.pass = r.empirical_var >= r.lower_bound;
  return r;
}

ThmReport verify_thm_bound(const Pmf& p, std::uint64_t n, std::uint64_t reps, double delta,
                           std::uint64_t seed, Center center, unsigned threads) {
  require_delta(delta);
  require_reps(reps);
  ThmReport r;
  r.k = p.size();
  r.n = n;
  r.reps = reps;
  r.delta = delta;
  r.t_delta = bounds::thm_kl_bound(bounds::BoundInputs::make(r.k, n, delta));

  auto losses = kl_trial_losses(p, n, reps, 1.0, seed, threads);
  if (center == Center::Mean) {
    r.center = stats::moments_of(losses, kTrialBlock).mean;
  } else {
    std::vector<double> copy = losses;
    r.center = stats::exact_quantile(copy, 0.5);
  }
  const double cut = r.center + r.t_delta;
  r.exceed_count = static_cast<std::uint64_t>(
      std::count_if(losses.begin(), losses.end(), [cut](double x) { return x > cut; }));
  r.exceed_frac = static_cast<double>(r.exceed_count) / static_cast<double>(reps);
  r.allowed = delta;
  r.threshold = exceedance_threshold(delta, reps);
  r.pass = r.exceed_frac <= r.threshold;
  return r;
}

ThmReport verify_thm_bound(std::uint64_t k, std::uint64_t n, std::uint64_t reps, double delta,
                           std::uint64_t seed, Center center, unsigned threads) {
  return verify_thm_bound(uniform_pmf(static_cast<std::size_t>(k)), n, reps, delta, seed, center,
                          threads);
}

PoissonTailReport poisson_tail_check(double lambda, double delta, std::uint64_t reps,
                                     std::uint64_t seed, unsigned threads) {
  require_delta(delta);
  require_reps(reps);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
  PoissonTailReport r;
  r.lambda = lambda;
  r.delta = delta;
  r.reps = reps;
  const auto parts = run_blocks(reps, threads, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t fails = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      RngState rng = derive_trial_rng(seed, i);
      const std::uint64_t draw = poisson(rng, lambda);
      const double gap = std::abs(static_cast<double>(draw) + 1.0 - lambda);
      if (gap > bounds::poisson_tail_radius(draw, delta)) ++fails;
    }
    return fails;
  });
  for (auto f : parts) r.fail_count += f;
  r.fail_frac = static_cast<double>(r.fail_count) / static_cast<double>(reps);
  r.allowed = delta;
  r.threshold = exceedance_threshold(delta, reps);
  r.pass = r.fail_frac <= r.threshold;
  return r;
}

CouplingReport coupling_diagnostic(std::uint64_t n, double prob, std::uint64_t reps,
                                   std::uint64_t seed, unsigned threads) {
  require_reps(reps);
  CouplingReport r;
  r.n = n;
  r.prob = prob;
  r.reps = reps;
  r.bound = bounds::coupling_gap_bound(n, prob);
  const auto parts = run_blocks(reps, threads, [&](std::uint64_t begin, std::uint64_t end) {
    stats::Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      RngState rng = derive_trial_rng(seed, i);
      const auto pair = coupled_pair(rng, n, prob);
      const double diff = static_cast<double>(pair.m) - static_cast<double>(pair.m_prime);
      m.push(diff / (static_cast<double>(pair.m_prime) + 1.0));
    }
    return m;
  });
  const auto moments = stats::merge_pairwise(parts);
  r.est_gap = moments.mean;
  const double se = std::sqrt(moments.variance() / static_cast<double>(reps));
  r.ci_low = r.est_gap - kZ99 * se;
  r.ci_high = r.est_gap + kZ99 * se;
  r.pass = r.ci_low <= r.bound;
  return r;
}

MarginalReport marginal_gof(std::uint64_t n, double prob, std::uint64_t reps, std::uint64_t seed,
                            unsigned threads) {
  if (reps < 100'000) throw ValidationError("marginal goodness of fit needs reps >= 1e5");
  MarginalReport r;
  r.n = n;
  r.prob = prob;
  r.reps = reps;
  struct Hists {
    std::vector<std::uint64_t> m;
    std::vector<std::uint64_t> m_prime;
  };
  const auto parts = run_blocks(reps, threads, [&](std::uint64_t begin, std::uint64_t end) {
    Hists h;
    for (std::uint64_t i = begin; i < end; ++i) {
      RngState rng = derive_trial_rng(seed, i);
      const auto pair = coupled_pair(rng, n, prob);
      stats::accumulate_histogram(h.m, pair.m);
      stats::accumulate_histogram(h.m_prime, pair.m_prime);
    }
    return h;
  });
  std::vector<std::vector<std::uint64_t>> ms, mps;
  ms.reserve(parts.size());
  mps.reserve(parts.size());
  for (const auto& h : parts) {
    ms.push_back(h.m);
    mps.push_back(h.m_prime);
  }
  const double lambda = static_cast<double>(n) * prob;
  r.m = stats::chi_square_gof(
      merge_histograms(ms), [&](std::uint64_t x) { return special::binomial_pmf(x, n, prob); }, n);
  r.m_prime = stats::chi_square_gof(
      merge_histograms(mps), [&](std::uint64_t x) { return special::poisson_pmf(x, lambda); },
      std::numeric_limits<std::uint64_t>::max());
  r.pass = r.m.p_value >= kGofSignificance && r.m_prime.p_value >= kGofSignificance;
  return r;
}

ExpectationReport expected_kl_check(const Pmf& p, std::uint64_t n, std::uint64_t reps,
                                    std::uint64_t seed, unsigned threads) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.reps = reps;
  cfg.master_seed = seed;
  cfg.t = 1.0;
  cfg.quantiles = false;
  cfg.threads = threads;
  const auto summary = run_kl_trials(p, cfg);
  ExpectationReport r;
  r.k = p.size();
  r.n = n;
  r.reps = reps;
  r.mean_kl = summary.mean_kl;
  r.std_kl = summary.std_kl;
  r.ceiling = static_cast<double>(r.k - 1) / static_cast<double>(n);
  r.threshold = r.ceiling + 3.0 * r.std_kl / std::sqrt(static_cast<double>(reps));
  r.pass = r.mean_kl <= r.threshold;
  return r;
}

// ---------------------------------------------------------------------------
// Exact-oracle facts.

std::vector<ClaimResult> run_fact_checks() {
  std::vector<ClaimResult> out;
  constexpr std::array<double, 5> probs{0.01, 0.1, 0.5, 0.9, 1.0};

  {
    double worst = 0.0;
    for (double p : probs) {
      for (std::uint64_t m = 0; m <= 200; ++m) {
        CompensatedSum exact;
        for (std::uint64_t x = 0; x <= m; ++x) {
          exact.add(special::binomial_pmf(x, m, p) / (static_cast<double>(x) + 1.0));
        }
        const double closed = bounds::binom_inv_moment(m, p);
        worst = std::max(worst, std::abs(closed - exact.value()) / exact.value());
      }
    }
    out.push_back({"facts", "E[1/(X+1)] closed form for X ~ Bin(m,p)",
                   "m in [0,200], p in {0.01,0.1,0.5,0.9,1}", worst, 1e-12,
                   "max relative error vs exact summation", worst <= 1e-12});
  }
  {
    double worst = 0.0;
    int below = 0, cases = 0;
    for (double p : probs) {
      for (std::uint64_t m = 0; m <= 200; ++m) {
        const double ratio = bounds::binom_inv_moment2_exact(m, p) / bounds::binom_inv_moment2_bound(m, p);
        worst = std::max(worst, ratio);
        if (p < 1.0) {
          ++cases;
          below += ratio < 1.0 ? 1 : 0;
        }
      }
    }
    out.push_back({"facts", "E[1/((X+1)(X+2))] <= 1/(p^2 (m+1)(m+2))",
                   "m in [0,200], p in {0.01,0.1,0.5,0.9,1}", worst, 1.0,
                   "max exact/bound ratio (tolerance 1e-10); strictly below 1 in double for " +
                       std::to_string(below) + "/" + std::to_string(cases) + " cases with p < 1",
                   worst <= 1.0 + 1e-10});
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    std::uint64_t arg = 0;
    for (std::uint64_t n = 1; n <= 10'000; ++n) {
      const double ratio = bounds::poisson_pmf_at_mean(n) * 3.0 * std::sqrt(static_cast<double>(n));
      if (ratio < worst) {
        worst = ratio;
        arg = n;
      }
    }
    out.push_back({"facts", "Pr[Poi(n) = n] >= 1/(3 sqrt n)", "n in [1, 10^4]", worst, 1.0,
                   "min of Pr[Poi(n)=n] * 3 sqrt(n), at n = " + std::to_string(arg), worst >= 1.0});
  }
  {
    using boost::multiprecision::cpp_int;
    std::uint64_t mismatches = 0;
    for (std::uint64_t n0 = 0; n0 <= 60; ++n0) {
      // With weights C(n0, x), compare 8 (2^n0 S2 - S1^2) against
      // (n0^2 - n0) 4^n0, i.e. the variance scaled by 4^n0 * 8.
      cpp_int s1 = 0, s2 = 0, binom = 1;
      for (std::uint64_t x = 0; x <= n0; ++x) {
        const cpp_int f = cpp_int(x) * (n0 - x);
        s1 += binom * f;
        s2 += binom * f * f;
        binom = binom * (n0 - x) / (x + 1);
      }
      const cpp_int pow2 = cpp_int(1) << n0;
      const cpp_int lhs = 8 * (pow2 * s2 - s1 * s1);
      const cpp_int rhs = cpp_int(n0 * n0 - n0) * pow2 * pow2;
      if (lhs != rhs) ++mismatches;
      const double formula = bounds::var_product_split(n0);
      if (formula * 8.0 != static_cast<double>(n0 * n0 - n0)) ++mismatches;
    }
    out.push_back({"facts", "Var(N1 (n0 - N1)) = (n0^2 - n0)/8 for N1 ~ Bin(n0, 1/2)",
                   "n0 in [0, 60], exact integer arithmetic", static_cast<double>(mismatches), 0.0,
                   "mismatching n0 values", mismatches == 0});
  }
  {
    constexpr std::array<std::pair<std::uint64_t, std::uint64_t>, 3> ranges{
        {{0, 10}, {5, 50}, {0, 100}}};
    for (const auto& [a, b] : ranges) {
      const double count = static_cast<double>(b - a + 1);
      CompensatedSum sx, sx2, sf, sf2;
      for (std::uint64_t x = a; x <= b; ++x) {
        const double xd = static_cast<double>(x);
        const double f = std::log(xd + 1.0);
        sx.add(xd);
        sx2.add(xd * xd);
        sf.add(f);
        sf2.add(f * f);
      }
      const double var_x = sx2.value() / count - std::pow(sx.value() / count, 2);
      const double var_f = sf2.value() / count - std::pow(sf.value() / count, 2);
      const double slope = 1.0 / (static_cast<double>(b) + 1.0);
      const double floor_value = slope * slope * var_x;
      out.push_back({"facts", "Var(f(X)) >= min f'^2 Var(X) for monotone f = log(x+1)",
                     "X uniform on {" + std::to_string(a) + ".." + std::to_string(b) + "}",
                     var_f, floor_value, "Var(f(X)) vs (1/(b+1))^2 Var(X)", var_f >= floor_value});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites.

namespace {

constexpr std::array<std::string_view, 8> kSuites{"all",      "facts",     "variance",
                                                   "thm",      "poisson-tail", "coupling",
                                                   "marginals", "expectation"};

void variance_suite(const SuiteOptions& o, std::vector<ClaimResult>& out) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cases{{2, 20}, {10, 100}, {64, 10240}};
  if (o.k || o.n) {
    const std::uint64_t k = o.k.value_or(10);
    cases = {{k, o.n.value_or(10 * k)}};
  }
  const std::uint64_t reps = o.reps.value_or(100'000);
  for (const auto& [k, n] : cases) {
    const auto r = verify_variance_lb(k, n, reps, o.seed, o.threads);
    out.push_back({"variance", "Var KL(uniform || Laplace) >= k/(32 n^2) when n >= 10k",
                   "k=" + std::to_string(k) + " n=" + std::to_string(n) + " reps=" + std::to_string(reps),
                   r.empirical_var, r.lower_bound,
                   "ratio=" + fmt(r.ratio) + " bootstrap95=[" + fmt(r.ci_low) + ", " + fmt(r.ci_high) + "]",
                   r.pass});
  }
}

void thm_suite(const SuiteOptions& o, std::vector<ClaimResult>& out) {
  struct Case {
    std::uint64_t k, n;
    double delta;
  };
  std::vector<Case> cases{{10, 1000, 0.1}, {100, 10'000, 0.05}};
  if (o.k || o.n || o.delta) {
    const std::uint64_t k = o.k.value_or(10);
    cases = {{k, o.n.value_or(100 * k), o.delta.value_or(0.1)}};
  }
  const std::uint64_t reps = o.reps.value_or(10'000);
  for (const auto& c : cases) {
    for (const Center center : {Center::Mean, Center::Median}) {
      const auto r = verify_thm_bound(c.k, c.n, reps, c.delta, o.seed, center, o.threads);
      out.push_back({"thm", "Pr[KL > E KL + t_delta] <= delta (centre: " +
                                std::string(center == Center::Mean ? "mean" : "median") + ")",
                     "k=" + std::to_string(c.k) + " n=" + std::to_string(c.n) + " delta=" + fmt(c.delta) +
                         " reps=" + std::to_string(reps),
                     r.exceed_frac, r.threshold,
                     "t_delta=" + fmt(r.t_delta) + " exceedances=" + std::to_string(r.exceed_count),
                     r.pass});
    }
  }
}

void poisson_tail_suite(const SuiteOptions& o, std::vector<ClaimResult>& out) {
  std::vector<double> lambdas{1.0, 10.0, 100.0, 1e4};
  std::vector<double> deltas{0.05, 0.1, 0.5};
  if (o.lambda) lambdas = {*o.lambda};
  if (o.delta) deltas = {*o.delta};
  const std::uint64_t reps = o.reps.value_or(1'000'000);
  for (double lambda : lambdas) {
    for (double delta : deltas) {
      const auto r = poisson_tail_check(lambda, delta, reps, o.seed, o.threads);
      out.push_back({"poisson-tail", "Pr[|N+1-lambda| > 6 sqrt(N+1) log(2/delta)] <= delta",
                     "lambda=" + fmt(lambda) + " delta=" + fmt(delta) + " reps=" + std::to_string(reps),
                     r.fail_frac, r.threshold, "failures=" + std::to_string(r.fail_count), r.pass});
    }
  }
}

std::vector<std::pair<std::uint64_t, double>> coupling_cases(const SuiteOptions& o) {
  if (o.n || o.prob) return {{o.n.value_or(100), o.prob.value_or(0.5)}};
  return {{20, 0.4}, {100, 0.5}, {10'000, 0.01}};
}

void coupling_suite(const SuiteOptions& o, std::vector<ClaimResult>& out) {
  const std::uint64_t reps = o.reps.value_or(1'000'000);
  for (const auto& [n, prob] : coupling_cases(o)) {
    const auto r = coupling_diagnostic(n, prob, reps, o.seed, o.threads);
    out.push_back({"coupling", "E[(M-M')/(M'+1)] <= 311/n + 160/(n^{3/2} p)",
                   "n=" + std::to_string(n) + " p=" + fmt(prob) + " reps=" + std::to_string(reps),
                   r.ci_low, r.bound,
                   "estimate=" + fmt(r.est_gap) + " ci99=[" + fmt(r.ci_low) + ", " + fmt(r.ci_high) + "]",
                   r.pass});
  }
}

void marginals_suite(const SuiteOptions& o, std::vector<ClaimResult>& out) {
  const std::uint64_t reps = o.reps.value_or(1'000'000);
  for (const auto& [n, prob] : coupling_cases(o)) {
    const auto r = marginal_gof(n, prob, reps, o.seed, o.threads);
    out.push_back({"marginals", "coupling marginals M ~ Bin(n,p), M' ~ Poi(np)",
                   "n=" + std::to_string(n) + " p=" + fmt(prob) + " reps=" + std::to_string(reps),
                   std::min(r.m.p_value, r.m_prime.p_value), kGofSignificance,
                   "chi2_m=" + fmt(r.m.chi2) + " (df " + std::to_string(r.m.df) + ", p " + fmt(r.m.p_value) +
                       ") chi2_mprime=" + fmt(r.m_prime.chi2) + " (df " + std::to_string(r.m_prime.df) +
                       ", p " + fmt(r.m_prime.p_value) + ")",
                   r.pass});
  }
}

void expectation_suite(const SuiteOptions& o, std::vector<ClaimResult>& out) {
  const std::uint64_t k = o.k.value_or(10);
  const std::uint64_t n = o.n.value_or(1000);
  const std::uint64_t reps = o.reps.value_or(100'000);
  for (const auto& spec : {DistSpec::uniform(k), DistSpec::zipf(k, 1.0), DistSpec::two_point(k, 0.99)}) {
    const auto r = expected_kl_check(spec.build(), n, reps, o.seed, o.threads);
    out.push_back({"expectation", "E KL(p || Laplace) <= (k-1)/n",
                   spec.describe() + " n=" + std::to_string(n) + " reps=" + std::to_string(reps),
                   r.mean_kl, r.threshold, "ceiling=" + fmt(r.ceiling) + " std=" + fmt(r.std_kl),
                   r.pass});
  }
}

}  // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

std::vector<ClaimResult> run_suite(std::string_view name, const SuiteOptions& options) {
  std::vector<ClaimResult> out;
  const bool all = name == "all";
  if (!all && std::find(kSuites.begin(), kSuites.end(), name) == kSuites.end()) {
    throw ValidationError("unknown suite '" + std::string(name) + "'");
  }
  if (all || name == "facts") {
    auto facts = run_fact_checks();
    out.insert(out.end(), facts.begin(), facts.end());
  }
  if (all || name == "variance") variance_suite(options, out);
  if (all || name == "thm") thm_suite(options, out);
  if (all || name == "poisson-tail") poisson_tail_suite(options, out);
  if (all || name == "coupling") coupling_suite(options, out);
  if (all || name == "marginals") marginals_suite(options, out);
  if (all || name == "expectation") expectation_suite(options, out);
  return out;
}

}  // namespace klconc
