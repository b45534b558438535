#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "netpop/error.hpp"
#include "netpop/inference.hpp"

namespace netpop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string edge_text(const LabelledGraph& g) {
  std::string s = "[";
  for (auto [i, j] : g.edges()) s += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  return s + "]";
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

// ---------------------------------------------------------------- priors

double log_density(const ScaledBetaPrior& p, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) return -kInf;
  const double x = 2.0 * alpha;
  const double log_beta = std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b);
  return std::log(2.0) + (p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) - log_beta;
}

double log_density(const GammaPrior& prior, double gamma) {
  if (!(gamma > 0.0)) return -kInf;
  return std::visit(overloaded{
                        [&](const ExponentialPrior& p) { return std::log(p.rate) - p.rate * gamma; },
                        [&](const TruncatedUniformPrior& p) { return gamma < p.kappa ? -std::log(p.kappa) : -kInf; },
                        [&](const MatchedScaledBetaPrior& p) {
                          // alpha = 1 / (1 + e^gamma), |d alpha / d gamma| = alpha (1 - alpha)
                          const double sp = softplus(gamma);
                          const double log_alpha = -sp;
                          const double log_one_minus = gamma - sp;
                          const double log_x = std::log(2.0) + log_alpha;
                          const double log_one_minus_x = std::log(std::expm1(gamma)) - sp;
                          const double log_beta = std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b);
                          return std::log(2.0) + (p.a - 1.0) * log_x + (p.b - 1.0) * log_one_minus_x - log_beta +
                                 log_alpha + log_one_minus;
                        },
                    },
                    prior);
}

double upper_bound(const GammaPrior& p) {
  if (const auto* t = std::get_if<TruncatedUniformPrior>(&p)) return t->kappa;
  return kInf;
}

std::string describe(const GammaPrior& prior) {
  return std::visit(overloaded{
                        [](const ExponentialPrior& p) { return "exponential(" + num(p.rate) + ")"; },
                        [](const TruncatedUniformPrior& p) { return "uniform(0," + num(p.kappa) + ")"; },
                        [](const MatchedScaledBetaPrior& p) {
                          return "matched-scaled-beta(" + num(p.a) + "," + num(p.b) + ")";
                        },
                    },
                    prior);
}

void validate(const CerCerHyper& h) {
  if (h.g0.n_vertices() < 2) throw Error(ErrorCode::InvalidConfig, "g0 must have at least two vertices");
  if (!(h.alpha0 > 0.0 && h.alpha0 < 0.5)) throw Error(ErrorCode::InvalidConfig, "alpha0 must lie in (0, 0.5)");
  if (!(h.beta_a > 0.0) || !(h.beta_b > 0.0)) throw Error(ErrorCode::InvalidConfig, "beta shapes must be positive");
}

void validate(const SnSnHyper& h) {
  if (h.g0.n_vertices() < 2) throw Error(ErrorCode::InvalidConfig, "g0 must have at least two vertices");
  if (!(h.gamma0 > 0.0) || !std::isfinite(h.gamma0)) throw Error(ErrorCode::InvalidConfig, "gamma0 must be positive");
  validate(h.metric);
  const bool ok = std::visit(overloaded{
                                 [](const ExponentialPrior& p) { return p.rate > 0.0 && std::isfinite(p.rate); },
                                 [](const TruncatedUniformPrior& p) { return p.kappa > 0.0 && std::isfinite(p.kappa); },
                                 [](const MatchedScaledBetaPrior& p) { return p.a > 0.0 && p.b > 0.0; },
                             },
                             h.gamma_prior);
  if (!ok) throw Error(ErrorCode::InvalidConfig, "gamma prior parameters must be positive");
}

// ---------------------------------------------------------------- config

double McmcConfig::tau(std::size_t n_slots) const {
  return flip_prob_tau ? *flip_prob_tau : 1.0 / static_cast<double>(std::max<std::size_t>(n_slots, 1));
}

std::size_t McmcConfig::inner_steps(std::size_t n_slots) const {
  return aux_inner_steps ? *aux_inner_steps : 20 * std::max<std::size_t>(n_slots, 1);
}

void validate(const McmcConfig& cfg, double walk_width) {
  if (cfg.n_samples == 0) throw Error(ErrorCode::InvalidConfig, "n_samples must be positive");
  if (cfg.lag == 0) throw Error(ErrorCode::InvalidConfig, "lag must be at least 1");
  if (cfg.flip_prob_tau && !(*cfg.flip_prob_tau > 0.0 && *cfg.flip_prob_tau < 1.0))
    throw Error(ErrorCode::InvalidConfig, "flip_prob_tau must lie in (0, 1)");
  if (!(cfg.kernel_mix_weight >= 0.0 && cfg.kernel_mix_weight <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "kernel_mix_weight must lie in [0, 1]");
  if (cfg.step_sizes_upsilon.empty()) throw Error(ErrorCode::InvalidConfig, "step_sizes_upsilon must be non-empty");
  for (double v : cfg.step_sizes_upsilon) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, "step sizes must be positive");
    if (v >= walk_width)
      throw Error(ErrorCode::StepTooLarge, "step size " + num(v) + " is not below the interval width " + num(walk_width));
  }
  if (cfg.aux_inner_steps && *cfg.aux_inner_steps == 0)
    throw Error(ErrorCode::InvalidConfig, "aux_inner_steps must be positive");
}

// ---------------------------------------------------------------- traces

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Trace::config_hash() const { return fnv1a64(config_text); }

std::vector<double> Trace::params() const {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.param);
  return v;
}

std::string describe(const CerCerHyper& h) {
  return "model=cer-cer;g0=" + edge_text(h.g0) + ";n_vertices=" + std::to_string(h.g0.n_vertices()) +
         ";alpha0=" + num(h.alpha0) + ";beta_a=" + num(h.beta_a) + ";beta_b=" + num(h.beta_b);
}

std::string describe(const SnSnHyper& h) {
  return "model=sn-sn;g0=" + edge_text(h.g0) + ";n_vertices=" + std::to_string(h.g0.n_vertices()) +
         ";gamma0=" + num(h.gamma0) + ";metric=" + h.metric.describe() + ";gamma_prior=" + describe(h.gamma_prior);
}

std::string describe(const McmcConfig& c) {
  std::ostringstream os;
  os << "n_samples=" << c.n_samples << ";burn_in=" << c.burn_in << ";lag=" << c.lag
     << ";tau=" << (c.flip_prob_tau ? num(*c.flip_prob_tau) : "auto") << ";mix=" << num(c.kernel_mix_weight)
     << ";upsilon=";
  for (double v : c.step_sizes_upsilon) os << num(v) << ",";
  os << ";aux_inner_steps=" << (c.aux_inner_steps ? std::to_string(*c.aux_inner_steps) : "auto")
     << ";seed=" << c.seed << ";initial_mode=" << (c.initial_mode ? edge_text(*c.initial_mode) : "auto")
     << ";initial_param=" << (c.initial_param ? num(*c.initial_param) : "auto");
  return os.str();
}

// ---------------------------------------------------------------- proposals

LabelledGraph propose_mode_flip(const LabelledGraph& g, double tau, Rng& rng) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::DomainError, "tau must lie in (0, 1)");
  LabelledGraph out = g;
  flip_bits_inplace(out, tau, rng);
  return out;
}

double flip_log_density(const LabelledGraph& a, const LabelledGraph& b, double tau) {
  const auto d = static_cast<double>(hamming(a, b));
  return d * std::log(tau) + (static_cast<double>(a.n_slots()) - d) * std::log1p(-tau);
}

EmpiricalProposal::EmpiricalProposal(const GraphPopulation& pop) : n_vertices_(pop.n_vertices()) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "empirical proposal needs data");
  p_ = edge_frequencies(pop);
  const double floor = 1.0 / (2.0 * static_cast<double>(pop.size()));
  log_odds_.resize(p_.size());
  for (std::size_t s = 0; s < p_.size(); ++s) {
    p_[s] = std::clamp(p_[s], floor, 1.0 - floor);
    log_all_absent_ += std::log1p(-p_[s]);
    log_odds_[s] = std::log(p_[s]) - std::log1p(-p_[s]);
  }
}

LabelledGraph EmpiricalProposal::sample(Rng& rng) const {
  LabelledGraph g(n_vertices_);
  for (std::size_t s = 0; s < p_.size(); ++s)
    if (rng.bernoulli(p_[s])) g.set_bit(s, true);
  return g;
}

double EmpiricalProposal::log_density(const LabelledGraph& g) const {
  double lq = log_all_absent_;
  const auto words = g.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (auto bits = words[w]; bits; bits &= bits - 1) lq += log_odds_[w * 64 + std::countr_zero(bits)];
  }
  return lq;
}

std::pair<LabelledGraph, EmpiricalProposal> propose_mode_empirical(const GraphPopulation& pop, Rng& rng) {
  EmpiricalProposal q(pop);
  auto g = q.sample(rng);
  return {std::move(g), std::move(q)};
}

double reflect(double y, double lower, std::optional<double> upper) {
  if (y < lower) return 2.0 * lower - y;
  if (upper && y > *upper) return 2.0 * *upper - y;
  return y;
}

double reflected_walk(double x, double lower, std::optional<double> upper, const std::vector<double>& upsilons,
                      Rng& rng) {
  if (upsilons.empty()) throw Error(ErrorCode::InvalidConfig, "no step sizes");
  const double width = upper ? *upper - lower : kInf;
  for (double v : upsilons)
    if (v >= width) throw Error(ErrorCode::StepTooLarge, "step size " + num(v) + " is not below the interval width");
  const double v = upsilons[rng.below(upsilons.size())];
  const double zeta = rng.uniform(-v, v);
  return reflect(x + zeta, lower, upper);
}

double mh_accept_prob(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

double flip_kernel_transition(const LabelledGraph& a, const LabelledGraph& b, double tau, double log_target_a,
                              double log_target_b) {
  return std::exp(flip_log_density(a, b, tau)) * mh_accept_prob(log_target_b - log_target_a);
}

}  // namespace netpop
