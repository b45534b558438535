#include "netpop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <boost/math/distributions/chi_squared.hpp>

#include "netpop/error.hpp"
#include "netpop/parallel.hpp"
#include "netpop/stats.hpp"

namespace netpop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<double> member_statistics(const StatisticSpec& s, const GraphPopulation& pop) {
  std::vector<double> v;
  v.reserve(pop.size());
  for (const auto& g : pop) v.push_back(evaluate(s, g));
  return v;
}

}  // namespace

std::string StatisticSpec::describe() const {
  return std::visit(overloaded{
                        [](const DegreeQuantile& d) {
                          char buf[48];
                          std::snprintf(buf, sizeof buf, "degree-quantile(%g)", d.q);
                          return std::string(buf);
                        },
                        [](const EdgeCount&) { return std::string("edge-count"); },
                        [](const MeanDegree&) { return std::string("mean-degree"); },
                    },
                    kind);
}

void validate(const StatisticSpec& s) {
  if (const auto* d = std::get_if<DegreeQuantile>(&s.kind); d && !(d->q >= 0.0 && d->q <= 1.0))
    throw Error(ErrorCode::DomainError, "degree quantile level must lie in [0, 1]");
}

double evaluate(const StatisticSpec& s, const LabelledGraph& g) {
  return std::visit(overloaded{
                        [&](const DegreeQuantile& d) {
                          const auto deg = g.degrees();
                          std::vector<double> x(deg.begin(), deg.end());
                          return quantile(x, d.q);
                        },
                        [&](const EdgeCount&) { return static_cast<double>(g.edge_count()); },
                        [&](const MeanDegree&) {
                          return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.n_vertices());
                        },
                    },
                    s.kind);
}

double population_statistic(const StatisticSpec& s, const GraphPopulation& pop) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "statistic of an empty population");
  return mean(member_statistics(s, pop));
}

std::vector<StatisticSpec> default_statistics() {
  return {StatisticSpec::degree_quantile(0.1), StatisticSpec::degree_quantile(0.5),
          StatisticSpec::degree_quantile(0.9)};
}

GraphPopulation simulate_from_draw(const FittedModel& model, const TraceSample& draw, std::size_t count, Rng& rng) {
  return std::visit(overloaded{
                        [&](const CerModel&) {
                          std::vector<LabelledGraph> out;
                          out.reserve(count);
                          const CerParams p{draw.mode, draw.param};
                          for (std::size_t k = 0; k < count; ++k) out.push_back(cer_sample(p, rng));
                          return GraphPopulation(std::move(out));
                        },
                        [&](const SnfModel& m) {
                          const std::size_t steps =
                              m.inner_steps ? *m.inner_steps : 20 * std::max<std::size_t>(draw.mode.n_slots(), 1);
                          return sample_snf(SnfParams{draw.mode, draw.param, m.metric}, count, steps, rng);
                        },
                    },
                    model);
}

double ppc_tail_probability(double eta0, std::span<const double> predictive) {
  if (predictive.empty()) throw Error(ErrorCode::EmptyTrace, "no predictive draws");
  std::size_t above = 0, below = 0;
  for (double e : predictive) {
    above += e >= eta0;
    below += e <= eta0;
  }
  const double k = static_cast<double>(predictive.size());
  return std::min(1.0, 2.0 * std::min(static_cast<double>(above) / k, static_cast<double>(below) / k));
}

PpcResult posterior_predictive_check(const Trace& trace, const FittedModel& model, const GraphPopulation& pop,
                                     const StatisticSpec& stat, std::size_t draws, Rng& rng, unsigned threads) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "posterior predictive check needs posterior samples");
  if (draws < 100) throw Error(ErrorCode::InvalidConfig, "posterior predictive check needs at least 100 draws");
  validate(stat);
  PpcResult out;
  out.eta0 = population_statistic(stat, pop);
  out.predictive.assign(draws, 0.0);
  const std::uint64_t base = rng.next();
  parallel_for(draws, threads, [&](std::size_t k) {
    Rng sub(split_seed(base, k));
    const auto& draw = trace.samples[sub.below(trace.size())];
    out.predictive[k] = population_statistic(stat, simulate_from_draw(model, draw, pop.size(), sub));
  });
  out.tail_prob = ppc_tail_probability(out.eta0, out.predictive);
  return out;
}

Chi2Config Chi2Config::equal_bins(std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::InvalidConfig, "at least one bin is required");
  Chi2Config c;
  c.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) c.edges[k] = static_cast<double>(k) / static_cast<double>(bins);
  return c;
}

void validate(const Chi2Config& cfg) {
  if (cfg.edges.size() < 3) throw Error(ErrorCode::InvalidConfig, "Bayesian chi-square needs at least two bins");
  if (cfg.edges.front() != 0.0 || cfg.edges.back() != 1.0)
    throw Error(ErrorCode::InvalidConfig, "bin edges must start at 0 and end at 1");
  for (std::size_t k = 1; k < cfg.edges.size(); ++k)
    if (!(cfg.edges[k] > cfg.edges[k - 1])) throw Error(ErrorCode::InvalidConfig, "bin edges must increase strictly");
  if (cfg.model_draws == 0 || cfg.posterior_draws == 0)
    throw Error(ErrorCode::InvalidConfig, "draw counts must be positive");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw Error(ErrorCode::InvalidConfig, "level must lie in (0, 1)");
}

std::vector<std::size_t> bin_counts(std::span<const double> u, std::span<const double> edges) {
  const std::size_t bins = edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : u) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t k = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    ++counts[std::min(k, bins - 1)];
  }
  return counts;
}

double bayes_chi2_statistic(std::span<const double> u, std::span<const double> edges) {
  const auto counts = bin_counts(u, edges);
  const double n = static_cast<double>(u.size());
  double rb = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = n * (edges[k + 1] - edges[k]);
    double diff = static_cast<double>(counts[k]) - expected;
    if (std::abs(diff) < 1e-9 * std::max(1.0, n)) diff = 0.0;  // bin widths carry rounding
    rb += diff * diff / expected;
  }
  return rb;
}

double randomized_pit(double y, std::span<const double> sorted_sims, double v) {
  const double m = static_cast<double>(sorted_sims.size());
  const auto left = static_cast<double>(std::lower_bound(sorted_sims.begin(), sorted_sims.end(), y) - sorted_sims.begin());
  const auto right = static_cast<double>(std::upper_bound(sorted_sims.begin(), sorted_sims.end(), y) - sorted_sims.begin());
  return (left + v * (right - left)) / m;
}

Chi2Result bayes_chi2(const Trace& trace, const FittedModel& model, const GraphPopulation& pop,
                      const StatisticSpec& stat, const Chi2Config& cfg, Rng& rng, unsigned threads) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "Bayesian chi-square needs posterior samples");
  validate(cfg);
  validate(stat);
  const std::size_t n = pop.size();
  if (n < cfg.bins())
    throw Error(ErrorCode::TooFewObservations,
                std::to_string(n) + " observations cannot populate " + std::to_string(cfg.bins()) + " bins");
  const auto observed = member_statistics(stat, pop);

  Chi2Result out;
  out.rb.assign(cfg.posterior_draws, 0.0);
  out.pit.assign(cfg.posterior_draws * n, 0.0);
  const std::uint64_t base = rng.next();
  parallel_for(cfg.posterior_draws, threads, [&](std::size_t k) {
    Rng sub(split_seed(base, k));
    const auto& draw = trace.samples[sub.below(trace.size())];
    auto sims = member_statistics(stat, simulate_from_draw(model, draw, cfg.model_draws, sub));
    std::sort(sims.begin(), sims.end());
    std::span<double> u(out.pit.data() + k * n, n);
    for (std::size_t j = 0; j < n; ++j) u[j] = randomized_pit(observed[j], sims, sub.uniform());
    out.rb[k] = bayes_chi2_statistic(u, cfg.edges);
  });

  const boost::math::chi_squared reference(static_cast<double>(cfg.bins() - 1));
  out.critical = boost::math::quantile(reference, cfg.level);
  std::size_t exceed = 0;
  for (double r : out.rb) exceed += r > out.critical;
  out.exceedance = static_cast<double>(exceed) / static_cast<double>(out.rb.size());
  out.lack_of_fit = out.exceedance > cfg.exceed_threshold;
  return out;
}

std::vector<GammaProfileRow> gamma_profile(const LabelledGraph& mode, const MetricSpec& m,
                                           const std::vector<double>& gammas, std::size_t draws_per_gamma,
                                           const McmcConfig& cfg, Rng& rng) {
  if (gammas.empty()) throw Error(ErrorCode::InvalidConfig, "gamma profile needs at least one gamma");
  if (draws_per_gamma == 0) throw Error(ErrorCode::InvalidConfig, "draws_per_gamma must be positive");
  std::vector<GammaProfileRow> rows;
  DistanceEvaluator dist(m);
  for (double gamma : gammas) {
    McmcConfig c = cfg;
    c.n_samples = draws_per_gamma;
    const auto trace = sample_snf_prior_mh(SnSnHyper{mode, gamma, m, ExponentialPrior{}}, c, rng);
    GammaProfileRow row;
    row.gamma = gamma;
    for (const auto& s : trace.samples) row.distances.push_back(dist(s.mode, mode));
    const auto& d = row.distances;
    row.mean = mean(d);
    row.min = *std::min_element(d.begin(), d.end());
    row.max = *std::max_element(d.begin(), d.end());
    row.q1 = quantile(d, 0.25);
    row.median = quantile(d, 0.5);
    row.q3 = quantile(d, 0.75);
    const double iqr = row.q3 - row.q1;
    row.whisker_low = row.max;
    row.whisker_high = row.min;
    for (double x : d) {
      if (x >= row.q1 - 1.5 * iqr) row.whisker_low = std::min(row.whisker_low, x);
      if (x <= row.q3 + 1.5 * iqr) row.whisker_high = std::max(row.whisker_high, x);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> suggest_gamma_steps(const std::vector<GammaProfileRow>& profile) {
  if (profile.empty()) throw Error(ErrorCode::InvalidConfig, "empty gamma profile");
  auto sorted = profile;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.gamma < b.gamma; });
  const double reference = sorted.front().mean;
  double star = sorted.back().gamma;
  for (const auto& row : sorted) {
    if (row.mean <= 0.5 * reference) {
      star = row.gamma;
      break;
    }
  }
  return {0.05 * star, 0.2 * star, 0.8 * star};
}

TraceHealth trace_health(const Trace& trace, std::size_t max_lag) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "cannot assess an empty trace");
  TraceHealth h;
  h.counters = trace.counters;
  for (const auto& c : trace.counters) {
    h.total_proposals += c.proposed;
    h.total_accepted += c.accepted;
  }
  const auto params = trace.params();
  for (std::size_t lag = 1; lag <= max_lag; ++lag) h.autocorrelation.push_back(autocorrelation(params, lag));
  std::unordered_set<LabelledGraph, GraphHash> distinct;
  for (const auto& s : trace.samples) distinct.insert(s.mode);
  h.distinct_graphs = distinct.size();
  return h;
}

}  // namespace netpop
