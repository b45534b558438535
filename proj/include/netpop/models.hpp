#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "netpop/graph.hpp"
#include "netpop/metrics.hpp"
#include "netpop/rng.hpp"

namespace netpop {

/// Centred Erdos-Renyi: every edge indicator of `mode` flipped independently
/// with probability alpha, 0 < alpha < 1/2.
struct CerParams {
  LabelledGraph mode;
  double alpha = 0.1;
};

/// Spherical network family: p(G) proportional to exp(-gamma * phi(d(G, mode))).
struct SnfParams {
  LabelledGraph mode;
  double gamma = 1.0;
  MetricSpec metric;
};

void validate(const CerParams& p);
void validate(const SnfParams& p);

/// A normalised distribution over an enumerated graph space.
struct ExactDistribution {
  std::vector<LabelledGraph> space;
  std::vector<double> log_probs;

  double probability(std::size_t k) const;
  /// Index of `g` within `space` (space is in increasing bit-set order).
  std::size_t index_of(const LabelledGraph& g) const;
  double entropy() const;
};

/// log-sum-exp of a sequence; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

double cer_log_pmf(const LabelledGraph& g, const CerParams& p);
/// Same pmf written in terms of a precomputed Hamming distance.
double cer_log_pmf_from_distance(std::size_t distance, std::size_t n_slots, double alpha);
LabelledGraph cer_sample(const CerParams& p, Rng& rng);
/// Flips each bit of `g` independently with probability `rate`.
void flip_bits_inplace(LabelledGraph& g, double rate, Rng& rng);
ExactDistribution cer_exact(const CerParams& p);
double cer_entropy(double alpha, std::size_t n_vertices);

double snf_log_kernel(const LabelledGraph& g, const SnfParams& p);
ExactDistribution snf_exact(const SnfParams& p);
/// log Z(mode, gamma) by enumeration.
double snf_log_partition(const SnfParams& p);
/// Hamming-metric partition function from the binomial counting identity;
/// independent of the mode.
double snf_log_partition_hamming(std::size_t n_vertices, double gamma, Phi phi);
/// Entropy computed both as log Z + gamma E[phi(d)] and as -sum p log p;
/// returns the latter and throws InternalInconsistency if they disagree.
double snf_entropy_exact(const SnfParams& p);

/// gamma = log((1 - alpha) / alpha): the SNF parameter reproducing CER(alpha)
/// under the Hamming metric with phi = identity.
double cer_to_snf_gamma(double alpha);
double snf_gamma_to_cer_alpha(double gamma);

/// sum_i d(g_i, candidate)^2 with the raw metric.
double frechet_objective(const GraphPopulation& pop, const LabelledGraph& candidate, DistanceEvaluator& dist);

/// Minimiser of the sum of squared distances. Without candidates the search
/// is exhaustive over the graph space (N <= 5); with candidates it is
/// restricted to them. Ties go to the smallest bit-set.
LabelledGraph sample_frechet_mean(const GraphPopulation& pop, const MetricSpec& m,
                                  std::optional<std::span<const LabelledGraph>> candidates = std::nullopt);

/// argmin over the space of sum_g p(g) d(g, psi)^2.
LabelledGraph frechet_mean_of_distribution(const ExactDistribution& d, const MetricSpec& m);

}  // namespace netpop
