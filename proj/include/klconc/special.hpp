#pragma once

// Numerically careful building blocks shared by the samplers, the bound
// calculators and the goodness-of-fit code.

#include <cstdint>

namespace klconc::special {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

/// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling-series remainder.
/// Defined for n >= 1 (n = 0 returns 0 by convention of the callers).
double stirling_error(double n) noexcept;

/// Loader's deviance term x log(x/np) + np - x, evaluated without
/// cancellation when x is close to np. x = 0 gives np.
double deviance_term(double x, double np) noexcept;

/// x - log1p(x) for x > -1, accurate when |x| is small. Always >= 0.
double x_minus_log1p(double x) noexcept;

double poisson_log_pmf(std::uint64_t x, double lambda) noexcept;
double poisson_pmf(std::uint64_t x, double lambda) noexcept;

double binomial_log_pmf(std::uint64_t x, std::uint64_t m, double prob) noexcept;
double binomial_pmf(std::uint64_t x, std::uint64_t m, double prob) noexcept;

}  // namespace klconc::special
