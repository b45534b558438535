#include "netpop/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "netpop/error.hpp"
#include "netpop/parallel.hpp"
#include "netpop/stats.hpp"

namespace netpop {

std::string to_string(StudyModel m) { return m == StudyModel::CerCer ? "cer-cer" : "sn-sn"; }

std::string to_string(Misspecification m) {
  switch (m) {
    case Misspecification::None: return "none";
    case Misspecification::Metric: return "metric";
    case Misspecification::Dependence: return "dependence";
  }
  return "unknown";
}

void validate(const StudyConfig& cfg) {
  validate(cfg.generator);
  validate(cfg.metric);
  if (cfg.n_vertices < 2) throw Error(ErrorCode::InvalidConfig, "studies need at least two vertices");
  if (cfg.replications == 0) throw Error(ErrorCode::InvalidConfig, "replications must be at least 1");
  if (cfg.sample_sizes.empty()) throw Error(ErrorCode::InvalidConfig, "no sample sizes given");
  for (auto n : cfg.sample_sizes)
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "sample sizes must be positive");
  for (double e : cfg.epsilons)
    if (!(e > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw Error(ErrorCode::InvalidConfig, "delta must lie in (0, 1)");
  if (!(cfg.data_alpha >= 0.0 && cfg.data_alpha < 0.5))
    throw Error(ErrorCode::InvalidConfig, "data_alpha must lie in [0, 0.5)");
  if (!(cfg.data_gamma > 0.0)) throw Error(ErrorCode::InvalidConfig, "data_gamma must be positive");
  if (!(cfg.alpha0 > 0.0 && cfg.alpha0 < 0.5)) throw Error(ErrorCode::InvalidConfig, "alpha0 must lie in (0, 0.5)");
  if (!(cfg.gamma0 > 0.0)) throw Error(ErrorCode::InvalidConfig, "gamma0 must be positive");
  if (!(cfg.persist_p >= 0.0 && cfg.persist_p <= 1.0) || !(cfg.flip_p >= 0.0 && cfg.flip_p <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "Markov generator probabilities must lie in [0, 1]");
  if (!(cfg.nominal > 0.0 && cfg.nominal < 1.0)) throw Error(ErrorCode::InvalidConfig, "nominal level must lie in (0, 1)");
  if (cfg.predictive_draws == 0 || cfg.rho_draws == 0) throw Error(ErrorCode::InvalidConfig, "draw counts must be positive");
  validate(cfg.mcmc, 0.5);
  for (double v : cfg.gamma_steps)
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidConfig, "gamma steps must be positive");
}

namespace {

std::size_t max_sample_size(const StudyConfig& cfg) {
  return *std::max_element(cfg.sample_sizes.begin(), cfg.sample_sizes.end());
}

std::size_t snf_steps(const StudyConfig& cfg) {
  return cfg.snf_steps ? *cfg.snf_steps : 20 * edge_slots(cfg.n_vertices);
}

MetricSpec model_metric(StudyModel model, const StudyConfig& cfg) {
  return model == StudyModel::CerCer ? MetricSpec::hamming() : cfg.metric;
}

/// Observations drawn either from CER(mode, data_alpha) or SNF(mode, data_gamma).
enum class DataKind { Cer, Snf };

GraphPopulation draw_data(DataKind kind, const MetricSpec& metric, const StudyConfig& cfg,
                          const LabelledGraph& mode, std::size_t count, Rng& rng) {
  if (kind == DataKind::Snf) return sample_snf(SnfParams{mode, cfg.data_gamma, metric}, count, snf_steps(cfg), rng);
  std::vector<LabelledGraph> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    LabelledGraph g = mode;
    flip_bits_inplace(g, cfg.data_alpha, rng);
    out.push_back(std::move(g));
  }
  return GraphPopulation(std::move(out));
}

/// Prior mode drawn as a perturbation of the truth with the prior's own
/// concentration.
LabelledGraph draw_prior_mode(StudyModel model, const MetricSpec& metric, const StudyConfig& cfg,
                              const LabelledGraph& truth, Rng& rng) {
  if (model == StudyModel::CerCer) return cer_sample(CerParams{truth, cfg.alpha0}, rng);
  return sample_snf(SnfParams{truth, cfg.gamma0, metric}, 1, snf_steps(cfg), rng)[0];
}

Trace fit_model(StudyModel model, const MetricSpec& metric, const GraphPopulation& data, const LabelledGraph& g0,
                const StudyConfig& cfg, std::uint64_t seed) {
  McmcConfig plugin = model == StudyModel::CerCer ? cfg.mcmc : cfg.plugin_mcmc;
  plugin.seed = seed;
  const CerCerHyper cer_hyper{g0, cfg.alpha0, 1.0, 9.0};
  Trace cer = fit_cer_cer(data, cer_hyper, plugin);
  if (model == StudyModel::CerCer) return cer;
  const double alpha_tilde = std::clamp(mean(cer.params()), 1e-6, 0.5 - 1e-6);
  McmcConfig sn = cfg.mcmc;
  sn.seed = split_seed(seed, 1);
  sn.step_sizes_upsilon = cfg.gamma_steps;
  const SnSnHyper sn_hyper{g0, cfg.gamma0, metric, ExponentialPrior{}};
  return fit_sn_sn(data, sn_hyper, sn, alpha_tilde);
}

double ci_halfwidth(double p, std::size_t reps) { return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(reps)); }

double posterior_mass_outside(const Trace& trace, const LabelledGraph& truth, DistanceEvaluator& dist, double eps) {
  std::size_t outside = 0;
  for (const auto& s : trace.samples) outside += dist(s.mode, truth) > eps;
  return static_cast<double>(outside) / static_cast<double>(trace.size());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<ConcentrationRow> concentration_study(const StudyConfig& cfg) {
  validate(cfg);
  const MetricSpec metric = model_metric(cfg.model, cfg);
  const DataKind kind = cfg.model == StudyModel::CerCer ? DataKind::Cer : DataKind::Snf;
  const std::size_t n_sizes = cfg.sample_sizes.size();
  const std::size_t n_eps = cfg.epsilons.size();
  // [replicate][size][epsilon] hits and [replicate][size] mode distances
  std::vector<char> hits(cfg.replications * n_sizes * n_eps, 0);
  std::vector<double> mode_dist(cfg.replications * n_sizes, 0.0);

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = split_seed(cfg.seed, r);
    Rng rng(rep_seed);
    const LabelledGraph truth = sample_generator(cfg.generator, cfg.n_vertices, rng);
    const LabelledGraph g0 = draw_prior_mode(cfg.model, metric, cfg, truth, rng);
    // one data set per replicate; smaller sample sizes use its prefix
    const GraphPopulation data = draw_data(kind, metric, cfg, truth, max_sample_size(cfg), rng);
    DistanceEvaluator dist(metric);
    for (std::size_t k = 0; k < n_sizes; ++k) {
      const auto trace = fit_model(cfg.model, metric, data.slice(0, cfg.sample_sizes[k]), g0, cfg,
                                   split_seed(rep_seed, k + 1));
      for (std::size_t e = 0; e < n_eps; ++e)
        hits[(r * n_sizes + k) * n_eps + e] = posterior_mass_outside(trace, truth, dist, cfg.epsilons[e]) < cfg.delta;
      mode_dist[r * n_sizes + k] = dist(posterior_summary(trace).mode, truth);
    }
  });

  std::vector<ConcentrationRow> rows;
  for (std::size_t k = 0; k < n_sizes; ++k) {
    double md = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) md += mode_dist[r * n_sizes + k];
    md /= static_cast<double>(cfg.replications);
    for (std::size_t e = 0; e < n_eps; ++e) {
      double f = 0.0;
      for (std::size_t r = 0; r < cfg.replications; ++r) f += hits[(r * n_sizes + k) * n_eps + e];
      f /= static_cast<double>(cfg.replications);
      rows.push_back({cfg.sample_sizes[k], generator_name(cfg.generator), cfg.epsilons[e], f,
                      ci_halfwidth(f, cfg.replications), md});
    }
  }
  return rows;
}

std::vector<MajorityVoteRow> majority_vote_comparison(const StudyConfig& cfg) {
  validate(cfg);
  for (auto n : cfg.sample_sizes)
    if (n % 2 == 0) throw Error(ErrorCode::InvalidConfig, "majority-vote comparison needs odd sample sizes");
  const MetricSpec metric = MetricSpec::hamming();
  const std::size_t n_sizes = cfg.sample_sizes.size();
  const std::size_t n_eps = cfg.epsilons.size();
  // per cell: majority hit, posterior-mass hit, posterior-mode hit
  std::vector<std::array<char, 3>> hits(cfg.replications * n_sizes * n_eps);

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = split_seed(cfg.seed, r);
    Rng rng(rep_seed);
    const LabelledGraph truth = sample_generator(cfg.generator, cfg.n_vertices, rng);
    const LabelledGraph g0 = draw_prior_mode(StudyModel::CerCer, metric, cfg, truth, rng);
    const GraphPopulation data = draw_data(DataKind::Cer, metric, cfg, truth, max_sample_size(cfg), rng);
    DistanceEvaluator dist(metric);
    for (std::size_t k = 0; k < n_sizes; ++k) {
      const auto train = data.slice(0, cfg.sample_sizes[k]);
      const auto trace = fit_model(StudyModel::CerCer, metric, train, g0, cfg, split_seed(rep_seed, k + 1));
      const double mv = dist(majority_vote(train), truth);
      const double pm = dist(posterior_summary(trace).mode, truth);
      for (std::size_t e = 0; e < n_eps; ++e) {
        const double eps = cfg.epsilons[e];
        hits[(r * n_sizes + k) * n_eps + e] = {static_cast<char>(mv <= eps),
                                               static_cast<char>(posterior_mass_outside(trace, truth, dist, eps) < cfg.delta),
                                               static_cast<char>(pm <= eps)};
      }
    }
  });

  std::vector<MajorityVoteRow> rows;
  const double reps = static_cast<double>(cfg.replications);
  for (std::size_t k = 0; k < n_sizes; ++k) {
    for (std::size_t e = 0; e < n_eps; ++e) {
      MajorityVoteRow row{cfg.sample_sizes[k], generator_name(cfg.generator), cfg.epsilons[e], 0, 0, 0};
      for (std::size_t r = 0; r < cfg.replications; ++r) {
        const auto& h = hits[(r * n_sizes + k) * n_eps + e];
        row.majority_fraction += h[0];
        row.cer_fraction += h[1];
        row.cer_mode_fraction += h[2];
      }
      row.majority_fraction /= reps;
      row.cer_fraction /= reps;
      row.cer_mode_fraction /= reps;
      rows.push_back(row);
    }
  }
  return rows;
}

std::size_t rho_delta_cer(std::size_t n_slots, double alpha, double delta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::DomainError, "delta must lie in (0, 1)");
  if (alpha == 0.0) return 0;
  const double target = 1.0 - delta;
  const double n = static_cast<double>(n_slots);
  double cdf = 0.0;
  for (std::size_t r = 0; r <= n_slots; ++r) {
    const double k = static_cast<double>(r);
    const double log_pmf = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) + k * std::log(alpha) +
                           (n - k) * std::log1p(-alpha);
    cdf += std::exp(log_pmf);
    if (cdf >= target) return r;
  }
  return n_slots;
}

double rho_delta_snf(const SnfParams& p, double delta, std::size_t draws, std::size_t steps, Rng& rng) {
  const auto sample = sample_snf(p, draws, steps, rng);
  DistanceEvaluator dist(p.metric);
  std::vector<double> d;
  d.reserve(draws);
  for (const auto& g : sample) d.push_back(dist(g, p.mode));
  return quantile_lower(d, 1.0 - delta);
}

double covering_radius(const GraphPopulation& predictive, const GraphPopulation& test, const MetricSpec& m,
                       double delta) {
  if (predictive.empty() || test.empty()) throw Error(ErrorCode::EmptyPopulation, "covering radius needs graphs");
  DistanceEvaluator dist(m);
  std::vector<double> minima;
  minima.reserve(predictive.size());
  for (const auto& g : predictive) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : test) best = std::min(best, dist(g, t));
    minima.push_back(best);
  }
  return quantile_lower(minima, 1.0 - delta);
}

std::vector<PredictionRow> prediction_study(const StudyConfig& cfg) {
  validate(cfg);
  if (cfg.test_size == 0) throw Error(ErrorCode::InvalidConfig, "test_size must be positive");
  const MetricSpec metric = model_metric(cfg.model, cfg);
  const DataKind kind = cfg.model == StudyModel::CerCer ? DataKind::Cer : DataKind::Snf;
  const std::size_t n_sizes = cfg.sample_sizes.size();
  const std::size_t max_n = max_sample_size(cfg);
  std::vector<PredictionResult> results(cfg.replications * n_sizes);
  FittedModel fitted = CerModel{};
  if (cfg.model == StudyModel::SnSn) fitted = SnfModel{metric, snf_steps(cfg)};

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = split_seed(cfg.seed, r);
    Rng rng(rep_seed);
    const LabelledGraph truth = sample_generator(cfg.generator, cfg.n_vertices, rng);
    const LabelledGraph g0 = draw_prior_mode(cfg.model, metric, cfg, truth, rng);
    // training prefixes share one draw; the test set is the same for every n
    const GraphPopulation data = draw_data(kind, metric, cfg, truth, max_n + cfg.test_size, rng);
    const GraphPopulation test = data.slice(max_n, cfg.test_size);
    double rho;
    if (cfg.model == StudyModel::CerCer) {
      rho = static_cast<double>(rho_delta_cer(truth.n_slots(), cfg.data_alpha, cfg.delta));
    } else {
      Rng rho_rng(split_seed(rep_seed, 0x5eed));
      rho = rho_delta_snf(SnfParams{truth, cfg.data_gamma, metric}, cfg.delta, cfg.rho_draws, snf_steps(cfg), rho_rng);
    }
    for (std::size_t k = 0; k < n_sizes; ++k) {
      const std::uint64_t fit_seed = split_seed(rep_seed, k + 1);
      const auto trace = fit_model(cfg.model, metric, data.slice(0, cfg.sample_sizes[k]), g0, cfg, fit_seed);
      Rng pred_rng(split_seed(fit_seed, 2));
      std::vector<LabelledGraph> predictive;
      predictive.reserve(cfg.predictive_draws);
      for (std::size_t m = 0; m < cfg.predictive_draws; ++m) {
        const auto& draw = trace.samples[pred_rng.below(trace.size())];
        predictive.push_back(simulate_from_draw(fitted, draw, 1, pred_rng)[0]);
      }
      auto& res = results[r * n_sizes + k];
      res.psi_delta = covering_radius(GraphPopulation(std::move(predictive)), test, metric, cfg.delta);
      res.rho_delta = rho;
      res.ratio = rho > 0.0 ? res.psi_delta / rho : std::numeric_limits<double>::quiet_NaN();
    }
  });

  std::vector<PredictionRow> rows;
  for (std::size_t k = 0; k < n_sizes; ++k) {
    PredictionRow row;
    row.n = cfg.sample_sizes[k];
    row.generator = generator_name(cfg.generator);
    row.model = to_string(cfg.model);
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const auto& res = results[r * n_sizes + k];
      row.result.psi_delta += res.psi_delta;
      row.result.rho_delta += res.rho_delta;
      row.result.ratio += res.ratio;
      row.replicate_ratios.push_back(res.ratio);
    }
    const double reps = static_cast<double>(cfg.replications);
    row.result.psi_delta /= reps;
    row.result.rho_delta /= reps;
    row.result.ratio /= reps;
    rows.push_back(std::move(row));
  }
  return rows;
}

GraphPopulation dynamic_markov_sample(const LabelledGraph& g_init, double persist_p, double flip_p, std::size_t n,
                                      Rng& rng) {
  if (!(persist_p >= 0.0 && persist_p <= 1.0) || !(flip_p >= 0.0 && flip_p <= 1.0))
    throw Error(ErrorCode::DomainError, "Markov generator probabilities must lie in [0, 1]");
  std::vector<LabelledGraph> out;
  out.reserve(n);
  if (n == 0) return GraphPopulation(std::move(out));
  out.push_back(g_init);
  const double resample = 1.0 - persist_p;
  for (std::size_t k = 1; k < n; ++k) {
    LabelledGraph next = out.back();
    const std::size_t slots = next.n_slots();
    if (resample > 0.0) {
      for (std::size_t pos = rng.geometric(resample); pos < slots; pos += 1 + rng.geometric(resample))
        next.set_bit(pos, rng.bernoulli(flip_p));
    }
    out.push_back(std::move(next));
  }
  return GraphPopulation(std::move(out));
}

std::size_t robustness_bins(std::size_t n) { return std::clamp<std::size_t>(n / 2, 2, 5); }

namespace {

struct RobustnessArm {
  Misspecification kind;
  StudyModel fit;
  MetricSpec fit_metric;
  DataKind data;
  MetricSpec data_metric;
  std::string data_label;
};

std::vector<RobustnessArm> robustness_arms(const StudyConfig& cfg) {
  const MetricSpec own = model_metric(cfg.model, cfg);
  const DataKind own_data = cfg.model == StudyModel::CerCer ? DataKind::Cer : DataKind::Snf;
  const MetricSpec diffusion = cfg.metric.is_hamming() ? MetricSpec::diffusion(1.0) : cfg.metric;
  std::vector<RobustnessArm> arms;
  for (auto m : cfg.misspecifications) {
    switch (m) {
      case Misspecification::None:
        arms.push_back({m, cfg.model, own, own_data, own, own_data == DataKind::Cer ? "cer" : "snf"});
        break;
      case Misspecification::Metric:
        arms.push_back({m, StudyModel::SnSn, diffusion, DataKind::Cer, MetricSpec::hamming(), "cer"});
        arms.push_back({m, StudyModel::CerCer, MetricSpec::hamming(), DataKind::Snf, diffusion, "snf-diffusion"});
        break;
      case Misspecification::Dependence:
        arms.push_back({m, cfg.model, own, own_data, own, "markov"});
        break;
    }
  }
  return arms;
}

}  // namespace

std::vector<RobustnessRow> robustness_study(const StudyConfig& cfg) {
  validate(cfg);
  const auto arms = robustness_arms(cfg);
  const std::size_t n_sizes = cfg.sample_sizes.size();
  const std::size_t n_stats = cfg.statistics.size();
  const std::size_t cells = arms.size() * n_sizes * n_stats;
  // [replicate][cell] -> (ppc reject, chi2 reject)
  std::vector<std::array<char, 2>> rejects(cfg.replications * cells);

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = split_seed(cfg.seed, r);
    for (std::size_t a = 0; a < arms.size(); ++a) {
      const auto& arm = arms[a];
      Rng rng(split_seed(rep_seed, 100 + a));
      const LabelledGraph truth = sample_generator(cfg.generator, cfg.n_vertices, rng);
      const LabelledGraph g0 = draw_prior_mode(arm.fit, arm.fit_metric, cfg, truth, rng);
      const std::size_t max_n = max_sample_size(cfg);
      const GraphPopulation data = arm.kind == Misspecification::Dependence
                                       ? dynamic_markov_sample(truth, cfg.persist_p, cfg.flip_p, max_n, rng)
                                       : draw_data(arm.data, arm.data_metric, cfg, truth, max_n, rng);
      FittedModel fitted = CerModel{};
      if (arm.fit == StudyModel::SnSn) fitted = SnfModel{arm.fit_metric, snf_steps(cfg)};
      for (std::size_t k = 0; k < n_sizes; ++k) {
        const std::size_t n = cfg.sample_sizes[k];
        const auto train = data.slice(0, n);
        const std::uint64_t fit_seed = split_seed(split_seed(rep_seed, 100 + a), k + 1);
        const auto trace = fit_model(arm.fit, arm.fit_metric, train, g0, cfg, fit_seed);
        Chi2Config chi2 = Chi2Config::equal_bins(robustness_bins(n));
        chi2.posterior_draws = cfg.chi2_posterior_draws;
        chi2.model_draws = cfg.chi2_model_draws;
        for (std::size_t s = 0; s < n_stats; ++s) {
          Rng diag_rng(split_seed(fit_seed, 10 + s));
          const auto ppc = posterior_predictive_check(trace, fitted, train, cfg.statistics[s], cfg.ppc_draws, diag_rng);
          const auto rb = bayes_chi2(trace, fitted, train, cfg.statistics[s], chi2, diag_rng);
          rejects[r * cells + (a * n_sizes + k) * n_stats + s] = {static_cast<char>(ppc.tail_prob < cfg.nominal),
                                                                  static_cast<char>(rb.lack_of_fit)};
        }
      }
    }
  });

  std::vector<RobustnessRow> rows;
  const double reps = static_cast<double>(cfg.replications);
  for (std::size_t a = 0; a < arms.size(); ++a) {
    for (std::size_t k = 0; k < n_sizes; ++k) {
      for (std::size_t s = 0; s < n_stats; ++s) {
        RobustnessRow row{to_string(arms[a].fit), arms[a].data_label, arms[a].kind, cfg.statistics[s].describe(),
                          cfg.sample_sizes[k], 0.0, 0.0};
        for (std::size_t r = 0; r < cfg.replications; ++r) {
          const auto& x = rejects[r * cells + (a * n_sizes + k) * n_stats + s];
          row.ppc_rejection += x[0];
          row.chi2_rejection += x[1];
        }
        row.ppc_rejection /= reps;
        row.chi2_rejection /= reps;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string to_csv(const std::vector<ConcentrationRow>& rows) {
  std::ostringstream os;
  os << "n,generator,epsilon,fraction,ci_halfwidth,mean_mode_distance\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.generator << ',' << fmt(r.epsilon) << ',' << fmt(r.fraction) << ',' << fmt(r.ci_halfwidth)
       << ',' << fmt(r.mean_mode_distance) << '\n';
  return os.str();
}

std::string to_csv(const std::vector<MajorityVoteRow>& rows) {
  std::ostringstream os;
  os << "n,generator,epsilon,majority_vote,cer_posterior,cer_mode\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.generator << ',' << fmt(r.epsilon) << ',' << fmt(r.majority_fraction) << ','
       << fmt(r.cer_fraction) << ',' << fmt(r.cer_mode_fraction) << '\n';
  return os.str();
}

std::string to_csv(const std::vector<PredictionRow>& rows) {
  std::ostringstream os;
  os << "n,generator,model,psi_delta,rho_delta,ratio\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.generator << ',' << r.model << ',' << fmt(r.result.psi_delta) << ','
       << fmt(r.result.rho_delta) << ',' << fmt(r.result.ratio) << '\n';
  return os.str();
}

std::string to_csv(const std::vector<RobustnessRow>& rows) {
  std::ostringstream os;
  os << "model,data,misspecification,statistic,n,ppc_rejection,chi2_rejection\n";
  for (const auto& r : rows)
    os << r.model << ',' << r.data << ',' << to_string(r.misspecification) << ',' << r.statistic << ',' << r.n << ','
       << fmt(r.ppc_rejection) << ',' << fmt(r.chi2_rejection) << '\n';
  return os.str();
}

}  // namespace netpop
