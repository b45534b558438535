#include <algorithm>
#include <cmath>
#include <limits>

#include "netpop/error.hpp"
#include "netpop/inference.hpp"
#include "netpop/parallel.hpp"
#include "netpop/stats.hpp"

namespace netpop {

namespace {

/// Flip-kernel Metropolis chain on exp(-gamma phi(d(x, center))). Flips are
/// applied in place and undone on rejection; under the Hamming metric the
/// distance is updated incrementally.
class SnfChain {
public:
  SnfChain(LabelledGraph start, const LabelledGraph& center, double gamma, double tau, DistanceEvaluator& dist)
      : x_(std::move(start)), center_(center), gamma_(gamma), tau_(tau), dist_(dist),
        hamming_(dist.spec().is_hamming()) {
    d_ = dist_(x_, center_);
  }

  void step(Rng& rng) {
    flips_.clear();
    const std::size_t slots = x_.n_slots();
    for (std::size_t pos = rng.geometric(tau_); pos < slots; pos += 1 + rng.geometric(tau_)) flips_.push_back(pos);
    if (flips_.empty()) return;
    double d_new = d_;
    for (std::size_t pos : flips_) {
      x_.flip_bit(pos);
      if (hamming_) d_new += x_.bit(pos) != center_.bit(pos) ? 1.0 : -1.0;
    }
    if (!hamming_) d_new = dist_(x_, center_);
    const Phi phi = dist_.spec().phi;
    const double log_ratio = -gamma_ * (apply_phi(phi, d_new) - apply_phi(phi, d_));
    if (rng.uniform() < mh_accept_prob(log_ratio)) {
      d_ = d_new;
    } else {
      for (std::size_t pos : flips_) x_.flip_bit(pos);
    }
  }

  const LabelledGraph& state() const { return x_; }
  double distance() const { return d_; }

private:
  LabelledGraph x_;
  const LabelledGraph& center_;
  double gamma_;
  double tau_;
  DistanceEvaluator& dist_;
  bool hamming_;
  double d_ = 0.0;
  std::vector<std::size_t> flips_;
};

double checked_tau(const McmcConfig& cfg, std::size_t slots) {
  const double tau = cfg.tau(slots);
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidConfig, "flip_prob_tau must lie in (0, 1)");
  return tau;
}

}  // namespace

LabelledGraph snf_mh_draw(const LabelledGraph& start, const LabelledGraph& center, double gamma, double tau,
                          std::size_t steps, DistanceEvaluator& dist, Rng& rng) {
  SnfChain chain(start, center, gamma, tau, dist);
  for (std::size_t s = 0; s < steps; ++s) chain.step(rng);
  return chain.state();
}

GraphPopulation sample_snf(const SnfParams& p, std::size_t count, std::size_t steps, Rng& rng) {
  validate(p);
  DistanceEvaluator dist(p.metric);
  const double tau = 1.0 / static_cast<double>(std::max<std::size_t>(p.mode.n_slots(), 1));
  std::vector<LabelledGraph> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(snf_mh_draw(p.mode, p.mode, p.gamma, tau, steps, dist, rng));
  return GraphPopulation(std::move(out));
}

Trace sample_snf_prior_mh(const SnSnHyper& h, const McmcConfig& cfg, Rng& rng) {
  validate(h);
  validate(cfg, std::numeric_limits<double>::infinity());
  const double tau = checked_tau(cfg, h.g0.n_slots());
  DistanceEvaluator dist(h.metric);
  SnfChain chain(h.g0, h.g0, h.gamma0, tau, dist);
  Trace trace;
  trace.model = "snf-prior";
  trace.n_vertices = h.g0.n_vertices();
  trace.config_text = describe(h) + ";" + describe(cfg);
  const std::size_t total = cfg.total_iterations();
  for (std::size_t iter = 1; iter <= total; ++iter) {
    chain.step(rng);
    if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.lag == 0)
      trace.samples.push_back(
          {iter, chain.state(), h.gamma0, -h.gamma0 * apply_phi(h.metric.phi, chain.distance())});
  }
  return trace;
}

Trace fit_sn_sn(const GraphPopulation& pop, const SnSnHyper& h, const McmcConfig& cfg, double alpha_tilde) {
  validate(h);
  const double gamma_upper = upper_bound(h.gamma_prior);
  validate(cfg, gamma_upper);
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "cannot fit an empty population");
  if (pop.n_vertices() != h.g0.n_vertices())
    throw Error(ErrorCode::SizeMismatch, "prior mode and data have different vertex counts");
  if (!(alpha_tilde > 0.0 && alpha_tilde < 0.5))
    throw Error(ErrorCode::InvalidConfig, "alpha_tilde must lie in (0, 0.5)");

  const std::size_t slots = h.g0.n_slots();
  const std::size_t n = pop.size();
  const double tau = checked_tau(cfg, slots);
  const std::size_t inner = cfg.inner_steps(slots);
  const std::optional<double> upper =
      std::isfinite(gamma_upper) ? std::optional<double>(gamma_upper) : std::nullopt;

  DistanceEvaluator dist(h.metric);
  const EmpiricalProposal empirical(pop);
  Rng rng(cfg.seed);

  auto data_phi = [&](const LabelledGraph& g) {
    double s = 0.0;
    for (const auto& y : pop) s += dist.phi(y, g);
    return s;
  };
  auto aux_cer = [&](const std::vector<LabelledGraph>& aux, const LabelledGraph& g) {
    double s = 0.0;
    for (const auto& x : aux) s += cer_log_pmf_from_distance(hamming(x, g), slots, alpha_tilde);
    return s;
  };
  auto aux_phi = [&](const std::vector<LabelledGraph>& aux, const LabelledGraph& g) {
    double s = 0.0;
    for (const auto& x : aux) s += dist.phi(x, g);
    return s;
  };
  auto draw_aux = [&](const LabelledGraph& g, double gamma) {
    std::vector<LabelledGraph> aux;
    aux.reserve(n);
    for (std::size_t i = 0; i < n; ++i) aux.push_back(snf_mh_draw(g, g, gamma, tau, inner, dist, rng));
    return aux;
  };

  // state
  LabelledGraph mode = cfg.initial_mode ? *cfg.initial_mode : majority_vote(pop);
  if (mode.n_vertices() != h.g0.n_vertices()) throw Error(ErrorCode::SizeMismatch, "initial mode has the wrong size");
  double gamma = cfg.initial_param ? *cfg.initial_param : std::min(1.0, 0.5 * gamma_upper);
  if (!(gamma > 0.0 && gamma < gamma_upper)) throw Error(ErrorCode::InvalidConfig, "initial gamma outside the prior support");
  double prior_phi = dist.phi(mode, h.g0);
  double sum_data_phi = data_phi(mode);
  std::vector<LabelledGraph> aux = draw_aux(mode, gamma);
  double aux_log_f = aux_cer(aux, mode);
  double aux_sum_phi = aux_phi(aux, mode);
  double lq_mode = empirical.log_density(mode);

  auto log_kernel = [&](double pphi, double dphi, double g) {
    return -h.gamma0 * pphi + log_density(h.gamma_prior, g) - g * dphi;
  };

  Trace trace;
  trace.model = "sn-sn";
  trace.n_vertices = mode.n_vertices();
  trace.config_text = describe(h) + ";" + describe(cfg) + ";alpha_tilde=" + std::to_string(alpha_tilde);
  trace.counters = {{"flip", 0, 0}, {"empirical", 0, 0}, {"gamma", 0, 0}};
  trace.samples.reserve(cfg.n_samples);

  // One exchange step for a proposed (mode', gamma'). The auxiliary density
  // f is the CER(mode, alpha_tilde) law of the auxiliary graphs, evaluated at
  // the proposed mode for the fresh draws and at the current mode for the
  // current ones.
  auto exchange = [&](LabelledGraph proposal, double gamma_new, double log_proposal_ratio, KernelCounter& counter) {
    ++counter.proposed;
    const bool same_mode = proposal == mode;
    const double prior_phi_new = same_mode ? prior_phi : dist.phi(proposal, h.g0);
    const double data_phi_new = same_mode ? sum_data_phi : data_phi(proposal);
    auto aux_new = draw_aux(proposal, gamma_new);
    const double aux_log_f_new = aux_cer(aux_new, proposal);
    const double aux_phi_new = aux_phi(aux_new, proposal);

    const double log_ratio = (aux_log_f_new - aux_log_f) +
                             (log_kernel(prior_phi_new, data_phi_new, gamma_new) -
                              log_kernel(prior_phi, sum_data_phi, gamma)) +
                             (-gamma * aux_sum_phi + gamma_new * aux_phi_new) + log_proposal_ratio;
    if (std::isnan(log_ratio))
      throw Error(ErrorCode::NonFiniteLogRatio, "exchange ratio is not a number; check the metric and phi choice");
    if (rng.uniform() < mh_accept_prob(log_ratio)) {
      ++counter.accepted;
      mode = std::move(proposal);
      gamma = gamma_new;
      prior_phi = prior_phi_new;
      sum_data_phi = data_phi_new;
      aux = std::move(aux_new);
      aux_log_f = aux_log_f_new;
      aux_sum_phi = aux_phi_new;
      lq_mode = empirical.log_density(mode);
    }
  };

  const std::size_t total = cfg.total_iterations();
  for (std::size_t iter = 1; iter <= total; ++iter) {
    const bool use_flip = rng.uniform() < cfg.kernel_mix_weight;
    if (use_flip) {
      exchange(propose_mode_flip(mode, tau, rng), gamma, 0.0, trace.counters[0]);
    } else {
      auto proposal = empirical.sample(rng);
      const double lq_new = empirical.log_density(proposal);
      exchange(std::move(proposal), gamma, lq_mode - lq_new, trace.counters[1]);
    }

    const double gamma_new = reflected_walk(gamma, 0.0, upper, cfg.step_sizes_upsilon, rng);
    if (gamma_new > 0.0 && gamma_new < gamma_upper) {
      exchange(mode, gamma_new, 0.0, trace.counters[2]);
    } else {
      ++trace.counters[2].proposed;
    }

    if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.lag == 0)
      trace.samples.push_back({iter, mode, gamma, log_kernel(prior_phi, sum_data_phi, gamma)});
  }
  return trace;
}

DivideAndConquerResult divide_and_conquer_fit(const GraphPopulation& pop, const SnSnHyper& h,
                                              const McmcConfig& cfg, std::size_t n_subsets,
                                              double alpha_tilde, unsigned threads) {
  if (n_subsets == 0 || pop.size() % n_subsets != 0)
    throw Error(ErrorCode::IndivisiblePopulation, "population of size " + std::to_string(pop.size()) +
                                                      " cannot be split into " + std::to_string(n_subsets) +
                                                      " equal subsets");
  const std::size_t chunk = pop.size() / n_subsets;
  DivideAndConquerResult out;
  out.subset_traces.resize(n_subsets);
  parallel_for(n_subsets, threads, [&](std::size_t k) {
    McmcConfig sub = cfg;
    sub.seed = n_subsets == 1 ? cfg.seed : split_seed(cfg.seed, k);
    out.subset_traces[k] = fit_sn_sn(pop.slice(k * chunk, chunk), h, sub, alpha_tilde);
  });

  std::vector<double> means, sds;
  for (const auto& t : out.subset_traces) {
    out.subset_modes.push_back(posterior_summary(t).mode);
    const auto g = t.params();
    means.push_back(mean(g));
    sds.push_back(std::sqrt(variance(g)));
  }
  const GraphPopulation modes(out.subset_modes);
  out.mode = sample_frechet_mean(modes, h.metric, std::span<const LabelledGraph>(out.subset_modes));

  double pooled = 0.0;
  for (double s : sds) pooled += s * s;
  pooled = std::sqrt(pooled / static_cast<double>(n_subsets));
  // heuristic target dispersion for the full-data posterior
  const double target = pooled / std::sqrt(static_cast<double>(n_subsets));
  const double centre = mean(means);
  for (std::size_t k = 0; k < n_subsets; ++k) {
    const double scale = sds[k] > 0.0 ? target / sds[k] : 0.0;
    for (double g : out.subset_traces[k].params()) out.gamma_samples.push_back(centre + (g - means[k]) * scale);
  }
  return out;
}

}  // namespace netpop
