#include "netpop/stats.hpp"

#include <algorithm>
#include <cmath>

#include "netpop/error.hpp"

namespace netpop {

namespace {

std::vector<double> sorted_copy(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::DomainError, "quantile of an empty sample");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

void check_level(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::DomainError, "quantile level outside [0, 1]");
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double quantile(std::span<const double> x, double q) {
  check_level(q);
  const auto v = sorted_copy(x);
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double quantile_lower(std::span<const double> x, double q) {
  check_level(q);
  const auto v = sorted_copy(x);
  const double pos = std::ceil(q * static_cast<double>(v.size()) - 1e-12);
  const auto k = static_cast<std::size_t>(std::max(pos, 1.0));
  return v[std::min(k, v.size()) - 1];
}

std::optional<double> autocorrelation(std::span<const double> x, std::size_t lag) {
  if (lag >= x.size()) return std::nullopt;
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return std::nullopt;
  const double m = mean(x);
  double denom = 0.0;
  for (double v : x) denom += (v - m) * (v - m);
  if (denom <= 0.0) return std::nullopt;
  double num = 0.0;
  for (std::size_t i = 0; i + lag < x.size(); ++i) num += (x[i] - m) * (x[i + lag] - m);
  return num / denom;
}

}  // namespace netpop
