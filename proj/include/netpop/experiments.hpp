#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netpop/diagnostics.hpp"
#include "netpop/generators.hpp"
#include "netpop/graph.hpp"
#include "netpop/inference.hpp"
#include "netpop/metrics.hpp"
#include "netpop/rng.hpp"

namespace netpop {

enum class StudyModel { CerCer, SnSn };
enum class Misspecification { None, Metric, Dependence };

std::string to_string(StudyModel m);
std::string to_string(Misspecification m);

/// Settings shared by the simulation studies. Defaults are desk scale:
/// 20 replicates and chains a tenth of the length used for publication runs.
struct StudyConfig {
  GeneratorSpec generator = ErdosRenyiSpec{};
  StudyModel model = StudyModel::CerCer;
  std::size_t n_vertices = 50;
  std::vector<std::size_t> sample_sizes{3, 5, 7, 10};
  std::size_t replications = 20;
  std::vector<double> epsilons{1.0, 2.0, 3.0};
  double delta = 0.05;
  std::uint64_t seed = 1;

  /// Dispersion of the simulated observations around the true mode.
  double data_alpha = 0.01;
  /// Used for SNF-generated observations.
  double data_gamma = 4.59511985013459;
  /// Prior hyperparameters; g0 is drawn around the true mode with them.
  double alpha0 = 0.01;
  double gamma0 = 0.01;
  MetricSpec metric = MetricSpec::hamming();
  McmcConfig mcmc = McmcConfig::with_lengths(250, 10000, 5);
  /// Chain used for the alpha-tilde plug-in of SN/SN fits.
  McmcConfig plugin_mcmc = McmcConfig::with_lengths(100, 2000, 5);
  /// Random-walk step sizes for gamma in SN/SN fits.
  std::vector<double> gamma_steps{0.05, 0.2, 0.8};
  unsigned threads = 1;

  // prediction
  std::size_t test_size = 20;
  std::size_t predictive_draws = 250;
  std::size_t rho_draws = 4000;

  // robustness
  std::vector<Misspecification> misspecifications{Misspecification::None, Misspecification::Metric,
                                                  Misspecification::Dependence};
  double persist_p = 0.9;
  double flip_p = 0.1;
  std::vector<StatisticSpec> statistics = default_statistics();
  std::size_t ppc_draws = 200;
  std::size_t chi2_posterior_draws = 100;
  std::size_t chi2_model_draws = 500;
  double nominal = 0.05;
  /// Inner MH steps when simulating SNF data; 20 N_e when unset.
  std::optional<std::size_t> snf_steps;
};

void validate(const StudyConfig& cfg);

struct ConcentrationRow {
  std::size_t n = 0;
  std::string generator;
  double epsilon = 0.0;
  /// Fraction of replicates with posterior mass >= 1 - delta in the ball.
  double fraction = 0.0;
  double ci_halfwidth = 0.0;
  double mean_mode_distance = 0.0;
};

std::vector<ConcentrationRow> concentration_study(const StudyConfig& cfg);

struct MajorityVoteRow {
  std::size_t n = 0;
  std::string generator;
  double epsilon = 0.0;
  /// Replicates where the majority-vote graph lies within epsilon of the truth.
  double majority_fraction = 0.0;
  /// Replicates whose CER/CER posterior puts >= 1 - delta mass in the ball.
  double cer_fraction = 0.0;
  /// Replicates whose CER/CER posterior mode lies within epsilon.
  double cer_mode_fraction = 0.0;
};

std::vector<MajorityVoteRow> majority_vote_comparison(const StudyConfig& cfg);

struct PredictionResult {
  double psi_delta = 0.0;
  double rho_delta = 0.0;
  double ratio = 0.0;
};

struct PredictionRow {
  std::size_t n = 0;
  std::string generator;
  std::string model;
  /// Means over replicates.
  PredictionResult result;
  std::vector<double> replicate_ratios;
};

/// Smallest r with P(Binomial(n_slots, alpha) <= r) >= 1 - delta.
std::size_t rho_delta_cer(std::size_t n_slots, double alpha, double delta);
/// (1 - delta) lower empirical quantile of d(G, mode) over SNF draws.
double rho_delta_snf(const SnfParams& p, double delta, std::size_t draws, std::size_t steps, Rng& rng);
/// (1 - delta) lower empirical quantile of the distances from each predictive
/// graph to its nearest test graph.
double covering_radius(const GraphPopulation& predictive, const GraphPopulation& test, const MetricSpec& m,
                       double delta);

std::vector<PredictionRow> prediction_study(const StudyConfig& cfg);

/// Markov chain of graphs: g_init first, then each bit kept with probability
/// persist_p or resampled from Bernoulli(flip_p).
GraphPopulation dynamic_markov_sample(const LabelledGraph& g_init, double persist_p, double flip_p, std::size_t n,
                                      Rng& rng);

struct RobustnessRow {
  std::string model;
  std::string data;
  Misspecification misspecification = Misspecification::None;
  std::string statistic;
  std::size_t n = 0;
  double ppc_rejection = 0.0;
  double chi2_rejection = 0.0;
};

/// Bins used by the Bayesian chi-square at sample size n: floor(n/2)
/// clamped to [2, 5].
std::size_t robustness_bins(std::size_t n);

std::vector<RobustnessRow> robustness_study(const StudyConfig& cfg);

std::string to_csv(const std::vector<ConcentrationRow>& rows);
std::string to_csv(const std::vector<MajorityVoteRow>& rows);
std::string to_csv(const std::vector<PredictionRow>& rows);
std::string to_csv(const std::vector<RobustnessRow>& rows);

}  // namespace netpop
