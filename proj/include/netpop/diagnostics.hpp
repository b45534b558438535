#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "netpop/graph.hpp"
#include "netpop/inference.hpp"
#include "netpop/metrics.hpp"
#include "netpop/rng.hpp"

namespace netpop {

struct DegreeQuantile {
  double q = 0.5;
};
struct EdgeCount {};
struct MeanDegree {};

/// Univariate network summary used by the fit diagnostics.
struct StatisticSpec {
  std::variant<DegreeQuantile, EdgeCount, MeanDegree> kind = EdgeCount{};

  static StatisticSpec degree_quantile(double q) { return {DegreeQuantile{q}}; }
  static StatisticSpec edge_count() { return {EdgeCount{}}; }
  static StatisticSpec mean_degree() { return {MeanDegree{}}; }
  std::string describe() const;
};

void validate(const StatisticSpec& s);
double evaluate(const StatisticSpec& s, const LabelledGraph& g);
/// Statistic averaged over the members of the population.
double population_statistic(const StatisticSpec& s, const GraphPopulation& pop);

/// Degree quantiles at 0.1, 0.5 and 0.9.
std::vector<StatisticSpec> default_statistics();

struct CerModel {};
struct SnfModel {
  MetricSpec metric;
  /// MH steps per simulated graph; 20 N_e when unset.
  std::optional<std::size_t> inner_steps;
};
/// Which family a trace was fitted with; decides how replicate data are drawn.
using FittedModel = std::variant<CerModel, SnfModel>;

/// `count` graphs from the model at one posterior draw.
GraphPopulation simulate_from_draw(const FittedModel& model, const TraceSample& draw, std::size_t count, Rng& rng);

struct PpcResult {
  double eta0 = 0.0;
  std::vector<double> predictive;
  double tail_prob = 1.0;
};

/// Two-sided tail probability 2 min(P(eta >= eta0), P(eta <= eta0)), capped at 1.
double ppc_tail_probability(double eta0, std::span<const double> predictive);

/// Posterior predictive check with `draws` replicate populations, each the
/// size of `pop`. Draw k uses its own RNG substream.
PpcResult posterior_predictive_check(const Trace& trace, const FittedModel& model, const GraphPopulation& pop,
                                     const StatisticSpec& stat, std::size_t draws, Rng& rng,
                                     unsigned threads = 1);

struct Chi2Config {
  /// Bin edges 0 = a_0 < ... < a_D = 1.
  std::vector<double> edges{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  /// Model simulations per posterior draw used to estimate the CDF.
  std::size_t model_draws = 500;
  std::size_t posterior_draws = 100;
  /// Quantile of the chi-square reference defining an exceedance.
  double level = 0.95;
  /// Lack of fit is declared when the exceedance fraction is above this.
  double exceed_threshold = 0.5;

  static Chi2Config equal_bins(std::size_t bins);
  std::size_t bins() const { return edges.size() - 1; }
};

void validate(const Chi2Config& cfg);

std::vector<std::size_t> bin_counts(std::span<const double> u, std::span<const double> edges);
/// R^B = sum_k (C_k - n p_k)^2 / (n p_k) for values in [0, 1].
double bayes_chi2_statistic(std::span<const double> u, std::span<const double> edges);
/// F(y-) + v (F(y) - F(y-)) for the empirical CDF of sorted simulations.
double randomized_pit(double y, std::span<const double> sorted_sims, double v);

struct Chi2Result {
  std::vector<double> rb;
  double critical = 0.0;
  double exceedance = 0.0;
  bool lack_of_fit = false;
  /// Randomised PIT values, posterior draw by posterior draw.
  std::vector<double> pit;
};

Chi2Result bayes_chi2(const Trace& trace, const FittedModel& model, const GraphPopulation& pop,
                      const StatisticSpec& stat, const Chi2Config& cfg, Rng& rng, unsigned threads = 1);

struct GammaProfileRow {
  double gamma = 0.0;
  std::vector<double> distances;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
};

/// For each gamma, MH draws from SNF(mode, gamma) and the resulting
/// distances to the mode. Uses burn_in, lag and tau from `cfg`.
std::vector<GammaProfileRow> gamma_profile(const LabelledGraph& mode, const MetricSpec& m,
                                           const std::vector<double>& gammas, std::size_t draws_per_gamma,
                                           const McmcConfig& cfg, Rng& rng);

/// Step sizes {0.05, 0.2, 0.8} g*, where g* is the first profiled gamma at
/// which the mean distance has halved relative to the smallest gamma.
std::vector<double> suggest_gamma_steps(const std::vector<GammaProfileRow>& profile);

struct TraceHealth {
  std::vector<KernelCounter> counters;
  std::size_t total_proposals = 0;
  std::size_t total_accepted = 0;
  /// Lags 1..max_lag; empty entries where the autocorrelation is undefined.
  std::vector<std::optional<double>> autocorrelation;
  std::size_t distinct_graphs = 0;
};

TraceHealth trace_health(const Trace& trace, std::size_t max_lag = 50);

}  // namespace netpop
