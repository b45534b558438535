#include <algorithm>
#include <unordered_map>

#include "netpop/error.hpp"
#include "netpop/inference.hpp"
#include "netpop/stats.hpp"

namespace netpop {

PosteriorSummary posterior_summary(const Trace& trace, double level) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "cannot summarise an empty trace");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::DomainError, "credible level must lie in (0, 1)");

  std::unordered_map<LabelledGraph, std::size_t, GraphHash> counts;
  for (const auto& s : trace.samples) ++counts[s.mode];
  std::vector<std::pair<LabelledGraph, std::size_t>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  PosteriorSummary out;
  out.level = level;
  const double total = static_cast<double>(trace.size());
  for (auto& [g, c] : sorted) out.frequencies.emplace_back(g, static_cast<double>(c) / total);
  out.mode = out.frequencies.front().first;
  const auto params = trace.params();
  out.param_mean = mean(params);
  out.lower = quantile(params, (1.0 - level) / 2.0);
  out.upper = quantile(params, 1.0 - (1.0 - level) / 2.0);
  return out;
}

}  // namespace netpop
