#pragma once

// Probability vectors, count vectors and the add-constant family of
// estimators over a finite alphabet [k].

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace klconc {

inline constexpr double kPmfSumTolerance = 1e-9;

class Counts;

/// A validated probability vector: nonnegative entries summing to 1.
class Pmf {
 public:
  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
  [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return probs_[i]; }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  explicit Pmf(std::vector<double> probs) : probs_(std::move(probs)) {}

  friend Pmf make_pmf(std::span<const double> weights);
  friend Pmf uniform_pmf(std::size_t k);
  friend Pmf add_t_estimate(const Counts& c, double t);

  std::vector<double> probs_;
};

/// Nonnegative weights over [k] with unconstrained total mass.
class Measure {
 public:
  explicit Measure(std::vector<double> weights);
  Measure(const Pmf& p) : weights_(p.probs().begin(), p.probs().end()) {}  // NOLINT

  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return weights_[i]; }
  [[nodiscard]] double total() const noexcept;

 private:
  std::vector<double> weights_;
};

/// Symbol occurrence counts. `total` is n under multinomial sampling and the
/// realised N under Poissonized sampling.
class Counts {
 public:
  /// Total is taken as the sum of the counts.
  explicit Counts(std::vector<std::uint64_t> counts);
  /// Throws ValidationError unless sum(counts) == total.
  Counts(std::vector<std::uint64_t> counts, std::uint64_t total);

  [[nodiscard]] std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] std::size_t size() const noexcept { return counts_.size(); }
  [[nodiscard]] std::uint64_t operator[](std::size_t i) const noexcept { return counts_[i]; }

  friend bool operator==(const Counts&, const Counts&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Validates and returns a Pmf. Weights whose sum is within 1e-9 of 1 are
/// divided by their sum once; anything else is rejected with a message naming
/// the offending index or the sum.
Pmf make_pmf(std::span<const double> weights);

Pmf uniform_pmf(std::size_t k);

/// N_i / n. Requires total >= 1.
Measure empirical_estimate(const Counts& c);

/// (N_i + t) / (n + k t). t = 1 is Laplace, t = 1/2 is Krichevsky-Trofimov.
Pmf add_t_estimate(const Counts& c, double t);

/// (N'_i + 1) / (n + k) for counts drawn with any total N. Sums to
/// (N + k) / (n + k), so this is a Pmf only when N == n.
Measure pseudo_estimate(const Counts& c, std::uint64_t n);

// Span kernels used by the trial loop; no validation.
void add_t_estimate_into(std::span<const std::uint64_t> counts, std::uint64_t total, double t,
                         std::span<double> out) noexcept;

}  // namespace klconc
