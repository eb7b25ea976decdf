#include "klconc/dist.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "klconc/error.hpp"
#include "klconc/summation.hpp"

namespace klconc {
namespace {

std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(x);
}

}  // namespace

Measure::Measure(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("measure must have at least one entry");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw ValidationError("measure weight[" + std::to_string(i) + "] = " + shortest(weights_[i]) +
                            " is not a finite nonnegative number");
    }
  }
}

double Measure::total() const noexcept { return compensated_sum(weights_); }

Counts::Counts(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)),
      total_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {}

Counts::Counts(std::vector<std::uint64_t> counts, std::uint64_t total)
    : counts_(std::move(counts)), total_(total) {
  const auto sum = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (sum != total_) {
    throw ValidationError("counts sum to " + std::to_string(sum) + " but total is " +
                          std::to_string(total_));
  }
}

Pmf make_pmf(std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("pmf must have at least one entry");
  CompensatedSum sum;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w)) {
      throw ValidationError("weight[" + std::to_string(i) + "] is not finite");
    }
    if (w < 0.0) {
      throw ValidationError("weight[" + std::to_string(i) + "] = " + shortest(w) + " is negative");
    }
    sum.add(w);
  }
  const double s = sum.value();
  if (std::abs(s - 1.0) > kPmfSumTolerance) {
    throw ValidationError("weights do not sum to 1: sum = " + shortest(s));
  }
  std::vector<double> probs(weights.begin(), weights.end());
  if (s != 1.0) {
    for (double& p : probs) p /= s;
  }
  return Pmf(std::move(probs));
}

Pmf uniform_pmf(std::size_t k) {
  if (k == 0) throw ValidationError("uniform pmf needs k >= 1");
  return Pmf(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Measure empirical_estimate(const Counts& c) {
  if (c.total() == 0) throw ValidationError("empirical estimate needs at least one sample");
  const double n = static_cast<double>(c.total());
  std::vector<double> w(c.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(c[i]) / n;
  return Measure(std::move(w));
}

void add_t_estimate_into(std::span<const std::uint64_t> counts, std::uint64_t total, double t,
                         std::span<double> out) noexcept {
  const double denom = static_cast<double>(total) + static_cast<double>(counts.size()) * t;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = (static_cast<double>(counts[i]) + t) / denom;
  }
}

Pmf add_t_estimate(const Counts& c, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ValidationError("add-t estimator needs finite t >= 0");
  }
  if (c.size() == 0) throw ValidationError("counts must have at least one entry");
  if (t == 0.0 && c.total() == 0) {
    throw ValidationError("add-0 (empirical) estimate needs at least one sample");
  }
  std::vector<double> probs(c.size());
  add_t_estimate_into(c.counts(), c.total(), t, probs);
  return Pmf(std::move(probs));
}

Measure pseudo_estimate(const Counts& c, std::uint64_t n) {
  if (n == 0) throw ValidationError("pseudo estimate needs n >= 1");
  if (c.size() == 0) throw ValidationError("counts must have at least one entry");
  const double denom = static_cast<double>(n) + static_cast<double>(c.size());
  std::vector<double> w(c.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (static_cast<double>(c[i]) + 1.0) / denom;
  return Measure(std::move(w));
}

}  // namespace klconc
