#pragma once

// Seeded Monte Carlo experiments on the KL loss of add-constant estimators.
// Every result is a pure function of its inputs: trial i always draws from
// derive_trial_rng(master_seed, i), and reductions run over a fixed block
// layout, so the thread count never changes the output.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "klconc/dist.hpp"

namespace klconc {

enum class DistKind { Uniform, Zipf, TwoPoint, File };

/// Named test distribution. Zipf weights are i^{-s} normalised; two-point
/// puts `mass` on symbol 1 and spreads the rest uniformly over the others.
struct DistSpec {
  DistKind kind = DistKind::Uniform;
  std::uint64_t k = 1;
  double zipf_exponent = 1.0;
  double mass = 0.99;
  std::string path;

  static DistSpec uniform(std::uint64_t k);
  static DistSpec zipf(std::uint64_t k, double s);
  static DistSpec two_point(std::uint64_t k, double mass);
  static DistSpec file(std::string path);

  /// name is "uniform", "zipf", "twopoint" or "file:PATH".
  static DistSpec parse(std::string_view name, std::uint64_t k, double zipf_exponent = 1.0,
                        double mass = 0.99);

  [[nodiscard]] Pmf build() const;
  [[nodiscard]] std::string describe() const;
};

Pmf zipf_pmf(std::uint64_t k, double s);
Pmf two_point_pmf(std::uint64_t k, double mass);

/// One nonnegative decimal weight per line; blank lines and lines starting
/// with '#' are ignored. Weights follow make_pmf rules.
Pmf parse_pmf_text(std::string_view text);
Pmf read_pmf_file(const std::string& path);

struct ExperimentConfig {
  DistSpec dist;
  std::uint64_t n = 1;
  std::uint64_t reps = 1;
  std::uint64_t master_seed = 0;
  double t = 1.0;
  std::optional<double> delta;
  bool quantiles = true;
  unsigned threads = 0;  // 0 = all cores
};

struct Quantiles {
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

struct TrialSummary {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::uint64_t reps = 0;
  double t = 1.0;
  double mean_kl = 0.0;
  double var_kl = 0.0;  // divisor reps - 1
  double std_kl = 0.0;
  std::optional<Quantiles> quantiles;
  std::optional<double> t_delta;
  std::optional<std::uint64_t> exceed_count;  // trials with KL > mean + t_delta
  double wall_seconds = 0.0;

  [[nodiscard]] std::optional<double> exceed_frac() const;
};

inline constexpr std::uint64_t kMaxBufferedReps = 10'000'000;

/// KL(p || add-t estimate) for each of `reps` multinomial trials of size n,
/// in trial order.
std::vector<double> kl_trial_losses(const Pmf& p, std::uint64_t n, std::uint64_t reps, double t,
                                    std::uint64_t master_seed, unsigned threads);

TrialSummary run_kl_trials(const ExperimentConfig& cfg);
/// Same as above with the distribution already built (cfg.dist is ignored).
TrialSummary run_kl_trials(const Pmf& p, const ExperimentConfig& cfg);

struct Figure1Row {
  std::uint64_t k = 0;
  double sample_std = 0.0;
  double heuristic_std = 0.0;
  std::optional<double> ratio;  // empty when sample_std == 0
};

/// Sample std of KL(uniform_k || Laplace) against sqrt(k/2)/n for each k.
std::vector<Figure1Row> figure1_experiment(std::span<const std::uint64_t> ks, std::uint64_t n,
                                           std::uint64_t reps, std::uint64_t master_seed,
                                           unsigned threads = 0);

}  // namespace klconc
