#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace netpop {

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> x);

/// Linear-interpolation quantile (the common "type 7" definition).
double quantile(std::span<const double> x, double q);
/// Inverse empirical CDF: smallest value v with F_n(v) >= q.
double quantile_lower(std::span<const double> x, double q);

/// Sample autocorrelation at `lag`; nullopt when the series has zero
/// variance or is too short.
std::optional<double> autocorrelation(std::span<const double> x, std::size_t lag);

}  // namespace netpop
