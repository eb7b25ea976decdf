#include "klconc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "klconc/error.hpp"
#include "klconc/summation.hpp"

namespace klconc::stats {

Moments Moments::merge(const Moments& a, const Moments& b) noexcept {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double d = b.mean - a.mean;
  out.mean = a.mean + d * (nb / n);
  out.m2 = a.m2 + b.m2 + d * d * (na * nb / n);
  return out;
}

Moments merge_pairwise(std::span<const Moments> parts) noexcept {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  return Moments::merge(merge_pairwise(parts.first(half)), merge_pairwise(parts.subspan(half)));
}

Moments moments_of(std::span<const double> values, std::size_t block) {
  if (block == 0) throw ValidationError("block size must be positive");
  std::vector<Moments> parts;
  parts.reserve(values.size() / block + 1);
  for (std::size_t begin = 0; begin < values.size(); begin += block) {
    Moments m;
    const std::size_t end = std::min(values.size(), begin + block);
    for (std::size_t i = begin; i < end; ++i) m.push(values[i]);
    parts.push_back(m);
  }
  return merge_pairwise(parts);
}

double exact_quantile(std::span<double> values, double level) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(level > 0.0 && level <= 1.0)) throw ValidationError("quantile level must lie in (0, 1]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw ValidationError("chi-square needs df > 0");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

namespace {

// Last point worth evaluating: past every observation and far enough into
// the right tail that the remaining expected count is negligible.
std::uint64_t evaluation_limit(std::span<const std::uint64_t> observed,
                               const std::function<double(std::uint64_t)>& pmf,
                               std::uint64_t support_max, double total) {
  std::uint64_t x = observed.empty() ? 0 : observed.size() - 1;
  if (x >= support_max) return support_max;
  double prev = pmf(x);
  while (x < support_max) {
    const double px = pmf(x + 1);
    if (px * total < 1e-12 && px <= prev) break;
    ++x;
    prev = px;
  }
  return x;
}

}  // namespace

GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         const std::function<double(std::uint64_t)>& pmf,
                         std::uint64_t support_max, double min_expected) {
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total == 0.0) throw ValidationError("goodness of fit needs at least one draw");
  for (std::size_t x = 0; x < observed.size(); ++x) {
    if (x > support_max && observed[x] != 0) {
      // Draws outside the support reject the fit outright.
      return GofResult{std::numeric_limits<double>::infinity(), 0, 0.0, 0};
    }
  }
  const std::uint64_t limit = evaluation_limit(observed, pmf, support_max, total);

  struct Bin {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Bin> bins;
  Bin open;
  CompensatedSum mass;
  for (std::uint64_t x = 0; x <= limit; ++x) {
    const double px = pmf(x);
    mass.add(px);
    open.expected += px * total;
    open.observed += x < observed.size() ? static_cast<double>(observed[x]) : 0.0;
    if (open.expected >= min_expected) {
      bins.push_back(open);
      open = Bin{};
    }
  }
  open.expected += std::max(0.0, 1.0 - mass.value()) * total;
  if (open.expected > 0.0 || open.observed > 0.0) {
    if (open.expected < min_expected && !bins.empty()) {
      bins.back().expected += open.expected;
      bins.back().observed += open.observed;
    } else {
      bins.push_back(open);
    }
  }

  GofResult result;
  result.bins = bins.size();
  for (const auto& b : bins) {
    if (b.expected <= 0.0) {
      if (b.observed > 0.0) result.chi2 = std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = b.observed - b.expected;
    result.chi2 += d * d / b.expected;
  }
  result.df = bins.size() > 1 ? bins.size() - 1 : 0;
  result.p_value = result.df == 0 ? (std::isinf(result.chi2) ? 0.0 : 1.0)
                                  : chi_square_sf(result.chi2, static_cast<double>(result.df));
  return result;
}

double kolmogorov_distance(std::span<const std::uint64_t> observed,
                           const std::function<double(std::uint64_t)>& pmf,
                           std::uint64_t support_max) {
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total == 0.0) throw ValidationError("kolmogorov distance needs at least one draw");
  const std::uint64_t limit = evaluation_limit(observed, pmf, support_max, total);
  CompensatedSum cdf;
  double emp = 0.0;
  double worst = 0.0;
  for (std::uint64_t x = 0; x <= limit; ++x) {
    cdf.add(pmf(x));
    if (x < observed.size()) emp += static_cast<double>(observed[x]);
    worst = std::max(worst, std::abs(emp / total - cdf.value()));
  }
  return worst;
}

void accumulate_histogram(std::vector<std::uint64_t>& hist, std::uint64_t value) {
  if (value >= hist.size()) hist.resize(static_cast<std::size_t>(value) + 1, 0);
  ++hist[static_cast<std::size_t>(value)];
}

}  // namespace klconc::stats
