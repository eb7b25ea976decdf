#pragma once

// Monte Carlo and exact-oracle verification of the concentration, variance
// and coupling claims. Each verify_* returns a report whose `pass` encodes
// the acceptance rule documented on the function.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "klconc/dist.hpp"
#include "klconc/stats.hpp"

namespace klconc {

/// Three binomial standard errors of slack on a claimed failure rate.
double exceedance_threshold(double delta, std::uint64_t reps);

struct VarianceReport {
  std::uint64_t k = 0, n = 0, reps = 0;
  double empirical_var = 0.0;
  double lower_bound = 0.0;
  double ratio = 0.0;  // empirical_var / lower_bound
  double ci_low = 0.0;  // bootstrap 95% percentile interval
  double ci_high = 0.0;
  bool pass = false;  // empirical_var >= lower_bound
};

inline constexpr std::uint64_t kBootstrapResamples = 2000;

/// Var(KL(uniform_k || Laplace)) over `reps` trials against k/(32 n^2).
/// Throws PreconditionError when n < 10k.
VarianceReport verify_variance_lb(std::uint64_t k, std::uint64_t n, std::uint64_t reps,
                                  std::uint64_t seed, unsigned threads = 0);

enum class Center { Mean, Median };

struct ThmReport {
  std::uint64_t k = 0, n = 0, reps = 0;
  double delta = 0.0;
  double t_delta = 0.0;
  double center = 0.0;
  std::uint64_t exceed_count = 0;
  double exceed_frac = 0.0;
  double allowed = 0.0;    // delta
  double threshold = 0.0;  // delta + 3 standard errors
  bool pass = false;
};

/// Fraction of trials with KL > center + t_delta, t_delta the full deviation
/// term of the main bound; pass iff at most delta + 3 sqrt(delta(1-delta)/reps).
ThmReport verify_thm_bound(const Pmf& p, std::uint64_t n, std::uint64_t reps, double delta,
                           std::uint64_t seed, Center center = Center::Mean, unsigned threads = 0);
ThmReport verify_thm_bound(std::uint64_t k, std::uint64_t n, std::uint64_t reps, double delta,
                           std::uint64_t seed, Center center = Center::Mean, unsigned threads = 0);

struct PoissonTailReport {
  double lambda = 0.0;
  double delta = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t fail_count = 0;
  double fail_frac = 0.0;
  double allowed = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Fraction of N ~ Poi(lambda) with |N + 1 - lambda| > 6 sqrt(N+1) log(2/delta).
PoissonTailReport poisson_tail_check(double lambda, double delta, std::uint64_t reps,
                                     std::uint64_t seed, unsigned threads = 0);

struct CouplingReport {
  std::uint64_t n = 0;
  double prob = 0.0;
  std::uint64_t reps = 0;
  double est_gap = 0.0;  // mean of (M - M') / (M' + 1)
  double ci_low = 0.0;   // 99% normal interval
  double ci_high = 0.0;
  double bound = 0.0;    // 311/n + 160/(n^{3/2} prob)
  bool pass = false;     // ci_low <= bound
};

CouplingReport coupling_diagnostic(std::uint64_t n, double prob, std::uint64_t reps,
                                   std::uint64_t seed, unsigned threads = 0);

struct MarginalReport {
  std::uint64_t n = 0;
  double prob = 0.0;
  std::uint64_t reps = 0;
  stats::GofResult m;        // vs Bin(n, prob)
  stats::GofResult m_prime;  // vs Poi(n prob)
  bool pass = false;         // both p-values >= 1e-3
};

inline constexpr double kGofSignificance = 1e-3;

/// Requires reps >= 1e5.
MarginalReport marginal_gof(std::uint64_t n, double prob, std::uint64_t reps, std::uint64_t seed,
                            unsigned threads = 0);

struct ExpectationReport {
  std::uint64_t k = 0, n = 0, reps = 0;
  double mean_kl = 0.0;
  double std_kl = 0.0;
  double ceiling = 0.0;    // (k-1)/n
  double threshold = 0.0;  // ceiling + 3 std / sqrt(reps)
  bool pass = false;
};

/// Mean Laplace KL against the (k-1)/n worst-case expectation.
ExpectationReport expected_kl_check(const Pmf& p, std::uint64_t n, std::uint64_t reps,
                                    std::uint64_t seed, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Named suites, as run by the command line.

struct ClaimResult {
  std::string suite;
  std::string anchor;  // which result the check exercises
  std::string claim;   // parameters of this instance
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  unsigned threads = 0;
  // Size overrides; unset means the suite's default parameter grid.
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> reps;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<double> prob;
};

std::span<const std::string_view> suite_names();

/// Runs "all" or one named suite. Throws ValidationError for unknown names.
std::vector<ClaimResult> run_suite(std::string_view name, const SuiteOptions& options);

/// Exact-oracle facts: inverse binomial moments, Poisson mass at the mean,
/// the product-split variance and the monotone-transform variance inequality.
std::vector<ClaimResult> run_fact_checks();

}  // namespace klconc
