#include "netpop/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netpop/error.hpp"

namespace netpop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

std::vector<LabelledGraph> space_for(const LabelledGraph& mode) { return enumerate_graph_space(mode.n_vertices()); }

}  // namespace

void validate(const CerParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 0.5))
    throw Error(ErrorCode::DomainError, "CER alpha must lie in (0, 0.5), got " + std::to_string(p.alpha));
}

void validate(const SnfParams& p) {
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw Error(ErrorCode::DomainError, "SNF gamma must be positive, got " + std::to_string(p.gamma));
  validate(p.metric);
}

double ExactDistribution::probability(std::size_t k) const { return std::exp(log_probs[k]); }

std::size_t ExactDistribution::index_of(const LabelledGraph& g) const {
  auto it = std::lower_bound(space.begin(), space.end(), g);
  if (it == space.end() || *it != g) throw Error(ErrorCode::SizeMismatch, "graph is not in the enumerated space");
  return static_cast<std::size_t>(it - space.begin());
}

double ExactDistribution::entropy() const {
  double h = 0.0;
  for (double lp : log_probs)
    if (lp > kNegInf) h -= std::exp(lp) * lp;
  return h;
}

double log_sum_exp(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double cer_log_pmf_from_distance(std::size_t distance, std::size_t n_slots, double alpha) {
  const auto d = static_cast<double>(distance);
  return d * std::log(alpha) + (static_cast<double>(n_slots) - d) * std::log1p(-alpha);
}

double cer_log_pmf(const LabelledGraph& g, const CerParams& p) {
  validate(p);
  return cer_log_pmf_from_distance(hamming(g, p.mode), p.mode.n_slots(), p.alpha);
}

void flip_bits_inplace(LabelledGraph& g, double rate, Rng& rng) {
  const std::size_t slots = g.n_slots();
  if (rate <= 0.0) return;
  for (std::size_t pos = rng.geometric(rate); pos < slots; pos += 1 + rng.geometric(rate)) g.flip_bit(pos);
}

LabelledGraph cer_sample(const CerParams& p, Rng& rng) {
  validate(p);
  LabelledGraph g = p.mode;
  flip_bits_inplace(g, p.alpha, rng);
  return g;
}

ExactDistribution cer_exact(const CerParams& p) {
  validate(p);
  ExactDistribution out;
  out.space = space_for(p.mode);
  out.log_probs.reserve(out.space.size());
  for (const auto& g : out.space) out.log_probs.push_back(cer_log_pmf(g, p));
  return out;
}

double cer_entropy(double alpha, std::size_t n_vertices) {
  if (!(alpha > 0.0 && alpha <= 0.5))
    throw Error(ErrorCode::DomainError, "CER entropy needs alpha in (0, 0.5], got " + std::to_string(alpha));
  return -static_cast<double>(edge_slots(n_vertices)) * (xlogx(1.0 - alpha) + xlogx(alpha));
}

double snf_log_kernel(const LabelledGraph& g, const SnfParams& p) {
  return -p.gamma * apply_phi(p.metric.phi, distance(g, p.mode, p.metric));
}

double snf_log_partition_hamming(std::size_t n_vertices, double gamma, Phi phi) {
  const std::size_t slots = edge_slots(n_vertices);
  std::vector<double> terms;
  terms.reserve(slots + 1);
  for (std::size_t h = 0; h <= slots; ++h)
    terms.push_back(log_binomial(slots, h) - gamma * apply_phi(phi, static_cast<double>(h)));
  return log_sum_exp(terms);
}

namespace {

std::vector<double> snf_log_kernels(const std::vector<LabelledGraph>& space, const SnfParams& p) {
  DistanceEvaluator dist(p.metric);
  std::vector<double> lk;
  lk.reserve(space.size());
  for (const auto& g : space) lk.push_back(-p.gamma * dist.phi(g, p.mode));
  return lk;
}

}  // namespace

double snf_log_partition(const SnfParams& p) {
  validate(p);
  return log_sum_exp(snf_log_kernels(space_for(p.mode), p));
}

ExactDistribution snf_exact(const SnfParams& p) {
  validate(p);
  ExactDistribution out;
  out.space = space_for(p.mode);
  out.log_probs = snf_log_kernels(out.space, p);
  const double log_z = log_sum_exp(out.log_probs);
  if (p.metric.is_hamming()) {
    const double closed = snf_log_partition_hamming(p.mode.n_vertices(), p.gamma, p.metric.phi);
    if (std::abs(closed - log_z) > 1e-9 * std::max(1.0, std::abs(log_z)))
      throw Error(ErrorCode::InternalInconsistency, "enumerated and combinatorial partition functions disagree");
  }
  for (double& lp : out.log_probs) lp -= log_z;
  return out;
}

double snf_entropy_exact(const SnfParams& p) {
  validate(p);
  auto space = space_for(p.mode);
  const auto log_kernel = snf_log_kernels(space, p);
  const double log_z = log_sum_exp(log_kernel);
  double direct = 0.0;
  double mean_phi = 0.0;
  for (double lk : log_kernel) {
    const double lp = lk - log_z;
    const double prob = std::exp(lp);
    direct -= prob * lp;
    // lk = -gamma * phi(d)
    mean_phi += prob * (-lk / p.gamma);
  }
  const double identity = log_z + p.gamma * mean_phi;
  if (std::abs(identity - direct) > 1e-8)
    throw Error(ErrorCode::InternalInconsistency, "entropy identity disagrees with direct sum");
  return direct;
}

double cer_to_snf_gamma(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw Error(ErrorCode::DomainError, "alpha must lie in (0, 0.5), got " + std::to_string(alpha));
  return std::log1p(-alpha) - std::log(alpha);
}

double snf_gamma_to_cer_alpha(double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::DomainError, "gamma must be positive");
  return 1.0 / (1.0 + std::exp(gamma));
}

double frechet_objective(const GraphPopulation& pop, const LabelledGraph& candidate, DistanceEvaluator& dist) {
  double s = 0.0;
  for (const auto& g : pop) {
    const double d = dist(g, candidate);
    s += d * d;
  }
  return s;
}

LabelledGraph sample_frechet_mean(const GraphPopulation& pop, const MetricSpec& m,
                                  std::optional<std::span<const LabelledGraph>> candidates) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "Frechet mean of an empty population");
  DistanceEvaluator dist(m);
  std::vector<LabelledGraph> space;
  std::span<const LabelledGraph> search;
  if (candidates) {
    if (candidates->empty()) throw Error(ErrorCode::EmptyPopulation, "empty candidate set");
    search = *candidates;
  } else {
    space = enumerate_graph_space(pop.n_vertices());
    search = space;
  }
  const LabelledGraph* best = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& c : search) {
    if (c.n_vertices() != pop.n_vertices()) throw Error(ErrorCode::SizeMismatch, "candidate size mismatch");
    const double v = frechet_objective(pop, c, dist);
    if (v < best_value || (v == best_value && best && c < *best)) {
      best_value = v;
      best = &c;
    }
  }
  return *best;
}

LabelledGraph frechet_mean_of_distribution(const ExactDistribution& d, const MetricSpec& m) {
  DistanceEvaluator dist(m);
  std::vector<double> prob(d.space.size());
  for (std::size_t k = 0; k < prob.size(); ++k) prob[k] = d.probability(k);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < d.space.size(); ++c) {
    double v = 0.0;
    for (std::size_t k = 0; k < d.space.size(); ++k) {
      if (prob[k] == 0.0) continue;
      const double dd = dist(d.space[k], d.space[c]);
      v += prob[k] * dd * dd;
    }
    // space is sorted, so strict improvement keeps the smallest bit-set on ties
    if (v < best_value) {
      best_value = v;
      best = c;
    }
  }
  return d.space[best];
}

}  // namespace netpop
