#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "netpop/graph.hpp"
#include "netpop/metrics.hpp"
#include "netpop/models.hpp"
#include "netpop/rng.hpp"

namespace netpop {

// ---------------------------------------------------------------- priors

/// Beta(a, b) rescaled to (0, 1/2).
struct ScaledBetaPrior {
  double a = 1.0;
  double b = 9.0;
};
double log_density(const ScaledBetaPrior& p, double alpha);

struct ExponentialPrior {
  double rate = 1.0;
};
struct TruncatedUniformPrior {
  double kappa = 10.0;
};
/// Law of gamma = log((1 - alpha) / alpha) when alpha follows a scaled Beta.
/// Makes SN/SN with the Hamming metric reproduce a CER/CER fit.
struct MatchedScaledBetaPrior {
  double a = 1.0;
  double b = 9.0;
};
using GammaPrior = std::variant<ExponentialPrior, TruncatedUniformPrior, MatchedScaledBetaPrior>;

double log_density(const GammaPrior& p, double gamma);
/// Upper end of the prior support (infinity unless truncated).
double upper_bound(const GammaPrior& p);
std::string describe(const GammaPrior& p);

struct CerCerHyper {
  LabelledGraph g0;
  double alpha0 = 0.01;
  double beta_a = 1.0;
  double beta_b = 9.0;
};

struct SnSnHyper {
  LabelledGraph g0;
  double gamma0 = 0.01;
  MetricSpec metric;
  GammaPrior gamma_prior = ExponentialPrior{};
};

void validate(const CerCerHyper& h);
void validate(const SnSnHyper& h);

// ---------------------------------------------------------------- config

struct McmcConfig {
  std::size_t n_samples = 250;
  std::size_t burn_in = 10000;
  std::size_t lag = 5;
  /// Per-bit flip probability of the local kernel; 1/N_e when unset.
  std::optional<double> flip_prob_tau;
  /// Probability of the flip kernel; the empirical kernel gets the rest.
  double kernel_mix_weight = 0.8;
  std::vector<double> step_sizes_upsilon{0.005, 0.02, 0.08};
  /// Inner MH steps per auxiliary graph; 20 N_e when unset.
  std::optional<std::size_t> aux_inner_steps;
  std::uint64_t seed = 1;
  /// Starting state; majority vote of the data when unset.
  std::optional<LabelledGraph> initial_mode;
  std::optional<double> initial_param;

  static McmcConfig with_lengths(std::size_t n_samples, std::size_t burn_in, std::size_t lag) {
    McmcConfig c;
    c.n_samples = n_samples;
    c.burn_in = burn_in;
    c.lag = lag;
    return c;
  }

  double tau(std::size_t n_slots) const;
  std::size_t inner_steps(std::size_t n_slots) const;
  std::size_t total_iterations() const { return burn_in + n_samples * lag; }
};

/// Checks ranges; `walk_width` is the width of the scalar domain (0.5 for
/// alpha, kappa or infinity for gamma) and bounds every step size.
void validate(const McmcConfig& cfg, double walk_width);

// ---------------------------------------------------------------- traces

struct TraceSample {
  std::size_t iter = 0;
  LabelledGraph mode;
  double param = 0.0;
  /// Log posterior kernel of the state. For SN/SN the intractable
  /// normalising constant is left out.
  double log_kernel = 0.0;
};

struct KernelCounter {
  std::string name;
  std::size_t proposed = 0;
  std::size_t accepted = 0;

  double rate() const { return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
  friend bool operator==(const KernelCounter&, const KernelCounter&) = default;
};

struct Trace {
  std::string model;  // "cer-cer" or "sn-sn"
  std::size_t n_vertices = 0;
  std::vector<TraceSample> samples;
  std::vector<KernelCounter> counters;
  /// Canonical text of the hyperparameters and sampler settings.
  std::string config_text;

  std::uint64_t config_hash() const;
  std::vector<double> params() const;
  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

std::string describe(const CerCerHyper& h);
std::string describe(const SnSnHyper& h);
std::string describe(const McmcConfig& cfg);

// ---------------------------------------------------------------- proposals

/// Flips every bit independently with probability tau. Symmetric.
LabelledGraph propose_mode_flip(const LabelledGraph& g, double tau, Rng& rng);

/// log q(b | a) for the flip kernel.
double flip_log_density(const LabelledGraph& a, const LabelledGraph& b, double tau);

/// Independence proposal drawing each bit from its (clamped) empirical
/// frequency in the data.
class EmpiricalProposal {
public:
  explicit EmpiricalProposal(const GraphPopulation& pop);

  LabelledGraph sample(Rng& rng) const;
  double log_density(const LabelledGraph& g) const;
  const std::vector<double>& probabilities() const noexcept { return p_; }

private:
  std::size_t n_vertices_;
  std::vector<double> p_;
  std::vector<double> log_odds_;
  double log_all_absent_ = 0.0;
};

std::pair<LabelledGraph, EmpiricalProposal> propose_mode_empirical(const GraphPopulation& pop, Rng& rng);

/// Reflects y back into (lower, upper) once; no upper bound when `upper` is
/// unset.
double reflect(double y, double lower, std::optional<double> upper);

/// Random walk x + Unif(-v, v) with v drawn uniformly from `upsilons`,
/// reflected at the bounds. Throws StepTooLarge when some v is not smaller
/// than the interval width.
double reflected_walk(double x, double lower, std::optional<double> upper, const std::vector<double>& upsilons,
                      Rng& rng);

/// Metropolis acceptance probability min(1, exp(log_ratio)).
double mh_accept_prob(double log_ratio);

/// Exact one-step probability of moving from a to b != a under the flip
/// kernel followed by the Metropolis accept step.
double flip_kernel_transition(const LabelledGraph& a, const LabelledGraph& b, double tau, double log_target_a,
                              double log_target_b);

// ---------------------------------------------------------------- CER/CER

/// Unnormalised log posterior of (mode, alpha).
double cer_cer_log_target(const LabelledGraph& mode, double alpha, const GraphPopulation& pop,
                          const CerCerHyper& h);

Trace fit_cer_cer(const GraphPopulation& pop, const CerCerHyper& h, const McmcConfig& cfg);

// ---------------------------------------------------------------- SN/SN

/// Runs `steps` flip-kernel MH steps targeting exp(-gamma phi(d(., center)))
/// from `start`; returns the final state.
LabelledGraph snf_mh_draw(const LabelledGraph& start, const LabelledGraph& center, double gamma, double tau,
                          std::size_t steps, DistanceEvaluator& dist, Rng& rng);

/// Draws from exp(-gamma phi(d(., center))) with independent short chains.
/// Each draw runs `steps` MH steps started at `center`.
GraphPopulation sample_snf(const SnfParams& p, std::size_t count, std::size_t steps, Rng& rng);

/// MH sampler for the prior on the mode, p(G | g0, gamma0). Uses burn_in,
/// lag, n_samples and tau from `cfg`; the chain starts at g0.
Trace sample_snf_prior_mh(const SnSnHyper& h, const McmcConfig& cfg, Rng& rng);

/// Auxiliary-variable sampler for SN/SN. `alpha_tilde` parameterises the
/// CER density of the auxiliary graphs.
Trace fit_sn_sn(const GraphPopulation& pop, const SnSnHyper& h, const McmcConfig& cfg, double alpha_tilde);

struct DivideAndConquerResult {
  LabelledGraph mode;
  std::vector<double> gamma_samples;
  std::vector<LabelledGraph> subset_modes;
  std::vector<Trace> subset_traces;
};

/// Splits the population into equal consecutive subsets, fits each, and
/// combines: the mode is the Frechet centroid of the subset posterior modes
/// and gamma draws are recentred and rescaled to a dispersion of
/// pooled-sd / sqrt(n_subsets) around the mean of the subset means.
DivideAndConquerResult divide_and_conquer_fit(const GraphPopulation& pop, const SnSnHyper& h,
                                              const McmcConfig& cfg, std::size_t n_subsets,
                                              double alpha_tilde, unsigned threads = 1);

// ---------------------------------------------------------------- oracles

/// Posterior on (graph space) x (scalar grid). Grid nodes are treated as
/// equally weighted quadrature points, so the grid should be uniform.
struct GridPosterior {
  std::vector<LabelledGraph> space;
  std::vector<double> grid;
  /// Row-major [graph][grid], normalised in probability.
  std::vector<double> log_probs;

  double log_prob(std::size_t graph, std::size_t node) const { return log_probs[graph * grid.size() + node]; }
  std::vector<double> graph_marginal() const;
  std::vector<double> param_marginal() const;
};

inline constexpr std::size_t kMaxOracleVertices = 4;

GridPosterior exact_posterior_cer(const GraphPopulation& pop, const CerCerHyper& h,
                                  const std::vector<double>& alpha_grid);
GridPosterior exact_posterior_snf(const GraphPopulation& pop, const SnSnHyper& h,
                                  const std::vector<double>& gamma_grid);

/// n midpoints of equal cells covering (lo, hi).
std::vector<double> midpoint_grid(double lo, double hi, std::size_t n);

/// Total variation distance between the trace's empirical mode marginal and
/// an exact marginal over `space`.
double trace_mode_tv(const Trace& trace, const std::vector<LabelledGraph>& space,
                     const std::vector<double>& marginal);

// ---------------------------------------------------------------- summary

struct PosteriorSummary {
  LabelledGraph mode;
  /// Visited graphs with their frequencies, most frequent first.
  std::vector<std::pair<LabelledGraph, double>> frequencies;
  double param_mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

PosteriorSummary posterior_summary(const Trace& trace, double level = 0.95);

}  // namespace netpop
