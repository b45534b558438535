#include <algorithm>
#include <cmath>

#include "netpop/error.hpp"
#include "netpop/inference.hpp"

namespace netpop {

namespace {

std::size_t total_distance(const GraphPopulation& pop, const LabelledGraph& g) {
  std::size_t s = 0;
  for (const auto& y : pop) s += hamming(y, g);
  return s;
}

void check_population(const GraphPopulation& pop, const LabelledGraph& g0) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "cannot fit an empty population");
  if (pop.n_vertices() != g0.n_vertices())
    throw Error(ErrorCode::SizeMismatch, "prior mode and data have different vertex counts");
}

/// Log posterior kernel in terms of sufficient statistics: the distance of
/// the mode to g0 and the summed distance of the data to the mode.
struct CerCerTarget {
  const CerCerHyper& h;
  double n_obs;
  double n_slots;

  double operator()(std::size_t d0, std::size_t data_distance, double alpha) const {
    const double s = static_cast<double>(data_distance);
    return cer_log_pmf_from_distance(d0, static_cast<std::size_t>(n_slots), h.alpha0) +
           log_density(ScaledBetaPrior{h.beta_a, h.beta_b}, alpha) + s * std::log(alpha) +
           (n_obs * n_slots - s) * std::log1p(-alpha);
  }
};

}  // namespace

double cer_cer_log_target(const LabelledGraph& mode, double alpha, const GraphPopulation& pop,
                          const CerCerHyper& h) {
  check_population(pop, h.g0);
  const CerCerTarget target{h, static_cast<double>(pop.size()), static_cast<double>(mode.n_slots())};
  return target(hamming(mode, h.g0), total_distance(pop, mode), alpha);
}

Trace fit_cer_cer(const GraphPopulation& pop, const CerCerHyper& h, const McmcConfig& cfg) {
  validate(h);
  validate(cfg, 0.5);
  check_population(pop, h.g0);
  const std::size_t slots = h.g0.n_slots();
  const double tau = cfg.tau(slots);
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidConfig, "flip_prob_tau must lie in (0, 1)");

  const CerCerTarget target{h, static_cast<double>(pop.size()), static_cast<double>(slots)};
  const EmpiricalProposal empirical(pop);
  Rng rng(cfg.seed);

  LabelledGraph mode = cfg.initial_mode ? *cfg.initial_mode : majority_vote(pop);
  if (mode.n_vertices() != h.g0.n_vertices()) throw Error(ErrorCode::SizeMismatch, "initial mode has the wrong size");
  std::size_t d0 = hamming(mode, h.g0);
  std::size_t sd = total_distance(pop, mode);
  double alpha;
  if (cfg.initial_param) {
    alpha = *cfg.initial_param;
    if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorCode::InvalidConfig, "initial alpha must lie in (0, 0.5)");
  } else {
    alpha = std::clamp(static_cast<double>(sd) / (static_cast<double>(pop.size()) * static_cast<double>(slots)),
                       1e-3, 0.49);
  }
  double lt = target(d0, sd, alpha);
  double lq_mode = empirical.log_density(mode);

  Trace trace;
  trace.model = "cer-cer";
  trace.n_vertices = mode.n_vertices();
  trace.config_text = describe(h) + ";" + describe(cfg);
  trace.counters = {{"flip", 0, 0}, {"empirical", 0, 0}, {"alpha", 0, 0}};
  trace.samples.reserve(cfg.n_samples);
  auto& c_flip = trace.counters[0];
  auto& c_emp = trace.counters[1];
  auto& c_alpha = trace.counters[2];

  const std::size_t total = cfg.total_iterations();
  for (std::size_t iter = 1; iter <= total; ++iter) {
    // mode update
    const bool use_flip = rng.uniform() < cfg.kernel_mix_weight;
    LabelledGraph proposal = use_flip ? propose_mode_flip(mode, tau, rng) : empirical.sample(rng);
    auto& counter = use_flip ? c_flip : c_emp;
    ++counter.proposed;
    const std::size_t d0_new = hamming(proposal, h.g0);
    const std::size_t sd_new = total_distance(pop, proposal);
    const double lt_new = target(d0_new, sd_new, alpha);
    const double lq_new = use_flip ? 0.0 : empirical.log_density(proposal);
    const double log_ratio = lt_new - lt + (use_flip ? 0.0 : lq_mode - lq_new);
    if (rng.uniform() < mh_accept_prob(log_ratio)) {
      ++counter.accepted;
      mode = std::move(proposal);
      d0 = d0_new;
      sd = sd_new;
      lt = lt_new;
      lq_mode = use_flip ? empirical.log_density(mode) : lq_new;
    }

    // alpha update; the reflected walk is symmetric
    const double alpha_new = reflected_walk(alpha, 0.0, 0.5, cfg.step_sizes_upsilon, rng);
    ++c_alpha.proposed;
    const double u = rng.uniform();
    if (alpha_new > 0.0 && alpha_new < 0.5) {
      const double lt_alpha = target(d0, sd, alpha_new);
      if (u < mh_accept_prob(lt_alpha - lt)) {
        ++c_alpha.accepted;
        alpha = alpha_new;
        lt = lt_alpha;
      }
    }

    if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.lag == 0) trace.samples.push_back({iter, mode, alpha, lt});
  }
  return trace;
}

}  // namespace netpop
