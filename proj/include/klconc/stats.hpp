#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace klconc::stats {

/// Streaming count / mean / sum of squared deviations (Welford), mergeable
/// with Chan's update so per-block results can be combined in a fixed tree.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) noexcept {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  /// Unbiased (divisor count - 1); 0 for fewer than two samples.
  [[nodiscard]] double variance() const noexcept {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }

  [[nodiscard]] static Moments merge(const Moments& a, const Moments& b) noexcept;
};

/// Balanced pairwise merge in index order. The result depends only on the
/// sequence of parts, never on how they were produced.
Moments merge_pairwise(std::span<const Moments> parts) noexcept;

/// Moments of a stored buffer, reduced in fixed blocks of `block` values so
/// the result matches a streamed computation over the same block layout.
Moments moments_of(std::span<const double> values, std::size_t block);

/// Nearest-rank quantile: the ceil(level * n)-th smallest value. Reorders
/// `values`. level in (0, 1].
double exact_quantile(std::span<double> values, double level);

/// Upper tail Pr[chi^2_df > x].
double chi_square_sf(double x, double df);

struct GofResult {
  double chi2 = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson chi-square goodness of fit of integer draws against an exact pmf
/// on {0, ..., support_max}. `observed[x]` counts draws equal to x (values
/// past the end count as zero). Adjacent bins are merged left to right until
/// each has expected count >= min_expected; the right tail beyond the last
/// evaluated point is folded into the final bin.
GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         const std::function<double(std::uint64_t)>& pmf,
                         std::uint64_t support_max, double min_expected = 5.0);

/// sup_x |F_empirical(x) - F(x)| over the integers of a discrete law.
double kolmogorov_distance(std::span<const std::uint64_t> observed,
                           const std::function<double(std::uint64_t)>& pmf,
                           std::uint64_t support_max);

/// Histogram helper: counts[v] += 1 for each value, growing as needed.
void accumulate_histogram(std::vector<std::uint64_t>& hist, std::uint64_t value);

}  // namespace klconc::stats
