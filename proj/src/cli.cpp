#include "netpop/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "netpop/config.hpp"
#include "netpop/diagnostics.hpp"
#include "netpop/error.hpp"
#include "netpop/experiments.hpp"
#include "netpop/generators.hpp"
#include "netpop/inference.hpp"
#include "netpop/io.hpp"
#include "netpop/metrics.hpp"
#include "netpop/models.hpp"
#include "netpop/stats.hpp"

namespace netpop {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Options {
  std::string config_path;
  std::string manifest_path;
  std::vector<std::string> assignments;
  std::string input;
  std::string out;
  unsigned threads = 0;
};

/// Collects the files written by one command and produces its manifest.
class Run {
public:
  Run(std::string command, RunConfig cfg) : command_(std::move(command)), cfg_(std::move(cfg)), started_(utc_now()) {
    if (cfg_.get("out").empty()) throw Error(ErrorCode::InvalidConfig, "missing required key 'out' (use --out)");
    dir_ = cfg_.get("out");
    fs::create_directories(dir_);
  }

  const RunConfig& cfg() const { return cfg_; }

  fs::path file(const std::string& name) {
    outputs_.push_back(name);
    return dir_ / name;
  }

  void write(const std::string& name, const std::string& text) { write_text_file(file(name), text); }

  void finish(std::ostream& out) {
    ojson m;
    m["command"] = command_;
    ojson config = ojson::object();
    for (const auto& [k, v] : cfg_.values()) config[k] = v;
    m["config"] = config;
    m["config_hash"] = hex64(cfg_.hash());
    m["seed"] = cfg_.get_u64("seed");
    m["version"] = std::string(kVersion);
    m["started_at"] = started_;
    m["finished_at"] = utc_now();
    m["outputs"] = outputs_;
    write_text_file(dir_ / "manifest.json", m.dump(2) + "\n");
    out << "wrote " << outputs_.size() << " file(s) to " << dir_.string() << "\n";
  }

private:
  std::string command_;
  RunConfig cfg_;
  std::string started_;
  fs::path dir_;
  std::vector<std::string> outputs_;
};

RunConfig build_config(const Options& o) {
  RunConfig cfg;
  if (!o.manifest_path.empty()) cfg = RunConfig::from_manifest(o.manifest_path);
  if (!o.config_path.empty())
    for (const auto& [k, v] : RunConfig::from_file(o.config_path).values()) cfg.set(k, v);
  for (const auto& a : o.assignments) cfg.set_assignment(a);
  if (!o.input.empty()) cfg.set("input", o.input);
  if (!o.out.empty()) cfg.set("out", o.out);
  if (o.threads) cfg.set("threads", std::to_string(o.threads));
  return cfg;
}

GraphPopulation load_population(const RunConfig& cfg) {
  if (cfg.get("input").empty()) throw Error(ErrorCode::InvalidConfig, "missing required key 'input' (use --input)");
  auto pop = read_population(cfg.get("input"));
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "input population is empty");
  return pop;
}

MetricSpec metric_from(const RunConfig& cfg) {
  const Phi phi = cfg.get("phi") == "square" ? Phi::Square : Phi::Identity;
  if (cfg.get("metric") == "diffusion") return MetricSpec::diffusion(cfg.get_real("t"), phi);
  return MetricSpec::hamming(phi);
}

LabelledGraph prior_mode(const RunConfig& cfg, const GraphPopulation& pop) {
  if (cfg.get("g0").empty()) return majority_vote(pop);
  auto g0 = read_adjacency_csv(cfg.get("g0"));
  if (g0.n_vertices() != pop.n_vertices())
    throw Error(ErrorCode::SizeMismatch, "g0 has " + std::to_string(g0.n_vertices()) + " vertices, data have " +
                                             std::to_string(pop.n_vertices()));
  return g0;
}

McmcConfig mcmc_from(const RunConfig& cfg) {
  McmcConfig m;
  m.n_samples = cfg.get_size("n_samples");
  m.burn_in = cfg.get_size("burn_in");
  m.lag = cfg.get_size("lag");
  m.flip_prob_tau = cfg.get_optional_real("tau");
  m.kernel_mix_weight = cfg.get_real("kernel_mix_weight");
  m.step_sizes_upsilon = cfg.get_reals("upsilon");
  m.aux_inner_steps = cfg.get_optional_size("aux_inner_steps");
  m.seed = cfg.get_u64("seed");
  return m;
}

GammaPrior gamma_prior_from(const RunConfig& cfg) {
  const auto kind = cfg.get("gamma_prior");
  if (kind == "uniform") return TruncatedUniformPrior{cfg.get_real("gamma_kappa")};
  if (kind == "matched-beta") return MatchedScaledBetaPrior{cfg.get_real("beta_a"), cfg.get_real("beta_b")};
  return ExponentialPrior{cfg.get_real("gamma_rate")};
}

CerCerHyper cer_hyper_from(const RunConfig& cfg, const GraphPopulation& pop) {
  return {prior_mode(cfg, pop), cfg.get_real("alpha0"), cfg.get_real("beta_a"), cfg.get_real("beta_b")};
}

SnSnHyper sn_hyper_from(const RunConfig& cfg, const GraphPopulation& pop) {
  return {prior_mode(cfg, pop), cfg.get_real("gamma0"), metric_from(cfg), gamma_prior_from(cfg)};
}

std::vector<double> default_profile_gammas() {
  std::vector<double> g;
  for (int k = 0; k <= 20; ++k) g.push_back(std::pow(10.0, -3.0 + 0.25 * k));
  return g;
}

StatisticSpec statistic_from(const std::string& name) {
  if (name == "edges") return StatisticSpec::edge_count();
  if (name == "mean-degree") return StatisticSpec::mean_degree();
  return StatisticSpec::degree_quantile(std::stod(name.substr(1)));
}

/// Fits the model chosen by the configuration. For SN/SN the CER/CER fit
/// supplies alpha-tilde and, unless configured, the gamma step sizes come
/// from a gamma profile around the prior mode.
struct FitOutput {
  Trace trace;
  std::optional<Trace> plugin;
  std::vector<GammaProfileRow> profile;
  FittedModel fitted = CerModel{};
};

FitOutput run_fit(const RunConfig& cfg, const GraphPopulation& pop, bool sn) {
  FitOutput out;
  const McmcConfig mcmc = mcmc_from(cfg);
  Trace cer = fit_cer_cer(pop, cer_hyper_from(cfg, pop), mcmc);
  if (!sn) {
    out.trace = std::move(cer);
    return out;
  }
  const SnSnHyper h = sn_hyper_from(cfg, pop);
  const double alpha_tilde =
      cfg.has("alpha_tilde") ? cfg.get_real("alpha_tilde") : std::clamp(mean(cer.params()), 1e-6, 0.5 - 1e-6);
  out.plugin = std::move(cer);

  McmcConfig sn_cfg = mcmc;
  sn_cfg.seed = split_seed(mcmc.seed, 1);
  if (cfg.has("gamma_upsilon")) {
    sn_cfg.step_sizes_upsilon = cfg.get_reals("gamma_upsilon");
  } else {
    const std::size_t slots = h.g0.n_slots();
    McmcConfig profile_cfg = McmcConfig::with_lengths(1, 20 * slots, std::max<std::size_t>(slots, 1));
    profile_cfg.flip_prob_tau = mcmc.flip_prob_tau;
    Rng rng(split_seed(mcmc.seed, 2));
    const auto gammas = cfg.has("profile_gammas") ? cfg.get_reals("profile_gammas") : default_profile_gammas();
    out.profile = gamma_profile(h.g0, h.metric, gammas, cfg.get_size("profile_draws"), profile_cfg, rng);
    sn_cfg.step_sizes_upsilon = suggest_gamma_steps(out.profile);
    const double upper = upper_bound(h.gamma_prior);
    for (double& v : sn_cfg.step_sizes_upsilon) v = std::min(v, 0.99 * upper);
  }
  out.trace = fit_sn_sn(pop, h, sn_cfg, alpha_tilde);
  out.fitted = SnfModel{h.metric, mcmc.aux_inner_steps};
  return out;
}

void write_fit(Run& run, const FitOutput& fit) {
  if (fit.plugin) write_trace(*fit.plugin, run.file("cer_trace.ndjson"));
  if (!fit.profile.empty()) {
    std::ostringstream os;
    write_gamma_profile_csv(fit.profile, os);
    run.write("gamma_profile.csv", os.str());
  }
  write_trace(fit.trace, run.file("trace.ndjson"));
  auto summary = summary_json(posterior_summary(fit.trace, run.cfg().get_real("level")));
  summary["model"] = fit.trace.model;
  run.write("summary.json", summary.dump(2) + "\n");
}

void cmd_simulate(Run& run) {
  const auto& cfg = run.cfg();
  Rng rng(cfg.get_u64("seed"));
  const auto spec = default_generator(cfg.get("generator"));
  const std::size_t n = cfg.get_size("n_vertices");
  const std::size_t count = cfg.get_size("count");
  const auto kind = cfg.get("sim_model");
  std::vector<LabelledGraph> graphs;
  LabelledGraph truth = sample_generator(spec, n, rng);
  if (kind == "generator") {
    graphs.push_back(truth);
    for (std::size_t k = 1; k < count; ++k) graphs.push_back(sample_generator(spec, n, rng));
  } else if (kind == "cer") {
    const CerParams p{truth, cfg.get_real("sim_alpha")};
    for (std::size_t k = 0; k < count; ++k) graphs.push_back(cer_sample(p, rng));
  } else {
    const std::size_t steps = cfg.has("aux_inner_steps") ? cfg.get_size("aux_inner_steps") : 20 * truth.n_slots();
    graphs = sample_snf(SnfParams{truth, cfg.get_real("sim_gamma"), metric_from(cfg)}, count, steps, rng).graphs();
  }
  write_population(GraphPopulation(std::move(graphs)), run.file("population.ndjson"));
  if (kind != "generator") {
    std::ostringstream os;
    write_adjacency_csv(truth, os);
    run.write("truth.csv", os.str());
  }
}

void cmd_frechet(Run& run) {
  const auto& cfg = run.cfg();
  const auto pop = load_population(cfg);
  const auto metric = metric_from(cfg);
  const bool exhaustive = pop.n_vertices() <= kMaxEnumerableVertices;
  const LabelledGraph centre =
      exhaustive ? sample_frechet_mean(pop, metric)
                 : sample_frechet_mean(pop, metric, std::span<const LabelledGraph>(pop.graphs()));
  DistanceEvaluator dist(metric);
  ojson j;
  j["n_vertices"] = centre.n_vertices();
  j["search"] = exhaustive ? "exhaustive" : "restricted-to-data";
  ojson e = ojson::array();
  for (auto [a, b] : centre.edges()) e.push_back({a + 1, b + 1});
  j["edges"] = e;
  j["objective"] = frechet_objective(pop, centre, dist);
  run.write("frechet.json", j.dump(2) + "\n");
  std::ostringstream os;
  write_adjacency_csv(centre, os);
  run.write("frechet.csv", os.str());
}

void cmd_distances(Run& run) {
  const auto& cfg = run.cfg();
  const auto pop = load_population(cfg);
  const auto d = distance_matrix(pop, metric_from(cfg), static_cast<unsigned>(cfg.get_size("threads")));
  std::ostringstream os;
  write_distance_csv(d, os);
  run.write("distances.csv", os.str());
}

void cmd_mds(Run& run) {
  const auto& cfg = run.cfg();
  const auto pop = load_population(cfg);
  const auto d = distance_matrix(pop, metric_from(cfg), static_cast<unsigned>(cfg.get_size("threads")));
  const auto coords = classical_mds(d, cfg.get_size("dim"));
  std::ostringstream os;
  write_mds_csv(coords, pop, os);
  run.write("mds.csv", os.str());
}

void cmd_fit(Run& run, bool sn) {
  const auto pop = load_population(run.cfg());
  write_fit(run, run_fit(run.cfg(), pop, sn));
}

void cmd_diagnose(Run& run) {
  const auto& cfg = run.cfg();
  const auto pop = load_population(cfg);
  const bool sn = cfg.get("model") == "sn-sn";
  const auto fit = run_fit(cfg, pop, sn);
  write_fit(run, fit);
  const unsigned threads = static_cast<unsigned>(cfg.get_size("threads"));
  const double nominal = cfg.get_real("nominal");
  Chi2Config chi2 = Chi2Config::equal_bins(cfg.get_size("chi2_bins"));
  chi2.model_draws = cfg.get_size("chi2_model_draws");
  chi2.posterior_draws = cfg.get_size("chi2_posterior_draws");

  ojson report;
  report["model"] = fit.trace.model;
  report["n_observations"] = pop.size();
  ojson results = ojson::array();
  std::ostringstream pit;
  pit << "statistic,draw,observation,u\n";
  Rng rng(split_seed(cfg.get_u64("seed"), 3));
  for (const auto& name : cfg.get_list("statistics")) {
    const auto stat = statistic_from(name);
    const auto ppc = posterior_predictive_check(fit.trace, fit.fitted, pop, stat, cfg.get_size("ppc_draws"), rng, threads);
    const auto rb = bayes_chi2(fit.trace, fit.fitted, pop, stat, chi2, rng, threads);
    ojson r;
    r["statistic"] = stat.describe();
    r["eta0"] = ppc.eta0;
    r["ppc_tail_prob"] = ppc.tail_prob;
    r["ppc_reject"] = ppc.tail_prob < nominal;
    r["chi2_critical"] = rb.critical;
    r["chi2_exceedance"] = rb.exceedance;
    r["chi2_lack_of_fit"] = rb.lack_of_fit;
    results.push_back(r);
    for (std::size_t d = 0; d < chi2.posterior_draws; ++d)
      for (std::size_t j = 0; j < pop.size(); ++j)
        pit << stat.describe() << ',' << d + 1 << ',' << j + 1 << ',' << rb.pit[d * pop.size() + j] << '\n';
  }
  report["diagnostics"] = results;
  const auto health = trace_health(fit.trace);
  ojson h;
  ojson counters = ojson::array();
  for (const auto& c : health.counters)
    counters.push_back(ojson{{"name", c.name}, {"proposed", c.proposed}, {"accepted", c.accepted}, {"rate", c.rate()}});
  h["counters"] = counters;
  h["distinct_graphs"] = health.distinct_graphs;
  ojson acf = ojson::array();
  for (const auto& a : health.autocorrelation) acf.push_back(a ? ojson(*a) : ojson(nullptr));
  h["autocorrelation"] = acf;
  report["trace_health"] = h;
  run.write("diagnostics.json", report.dump(2) + "\n");
  run.write("pit.csv", pit.str());
}

void cmd_experiment(Run& run) {
  const auto& cfg = run.cfg();
  StudyConfig s;
  s.generator = default_generator(cfg.get("generator"));
  s.model = cfg.get("model") == "sn-sn" ? StudyModel::SnSn : StudyModel::CerCer;
  s.n_vertices = cfg.get_size("n_vertices");
  s.sample_sizes = cfg.get_sizes("sample_sizes");
  s.replications = cfg.get_size("replications");
  s.epsilons = cfg.get_reals("epsilons");
  s.delta = cfg.get_real("delta");
  s.seed = cfg.get_u64("seed");
  s.data_alpha = cfg.get_real("data_alpha");
  s.data_gamma = cfg.get_real("data_gamma");
  s.alpha0 = cfg.get_real("alpha0");
  s.gamma0 = cfg.get_real("gamma0");
  s.metric = metric_from(cfg);
  s.mcmc = mcmc_from(cfg);
  if (cfg.has("gamma_upsilon")) s.gamma_steps = cfg.get_reals("gamma_upsilon");
  s.threads = static_cast<unsigned>(cfg.get_size("threads"));
  s.test_size = cfg.get_size("test_size");
  s.predictive_draws = cfg.get_size("predictive_draws");
  s.persist_p = cfg.get_real("persist_p");
  s.flip_p = cfg.get_real("flip_p");
  s.statistics.clear();
  for (const auto& name : cfg.get_list("statistics")) s.statistics.push_back(statistic_from(name));
  s.ppc_draws = cfg.get_size("ppc_draws");
  s.chi2_model_draws = cfg.get_size("chi2_model_draws");
  s.chi2_posterior_draws = cfg.get_size("chi2_posterior_draws");
  s.nominal = cfg.get_real("nominal");
  s.snf_steps = cfg.get_optional_size("snf_steps");
  s.misspecifications.clear();
  for (const auto& m : cfg.get_list("misspecifications"))
    s.misspecifications.push_back(m == "none" ? Misspecification::None
                                  : m == "metric" ? Misspecification::Metric
                                                  : Misspecification::Dependence);

  const auto study = cfg.get("study");
  if (study == "concentration") run.write("concentration.csv", to_csv(concentration_study(s)));
  else if (study == "majority") run.write("majority_vote.csv", to_csv(majority_vote_comparison(s)));
  else if (study == "prediction") run.write("prediction.csv", to_csv(prediction_study(s)));
  else run.write("robustness.csv", to_csv(robustness_study(s)));
}

void report_error(std::ostream& err, std::string_view code, const std::string& message, int exit_code) {
  ojson j;
  j["error"] = std::string(code);
  j["message"] = message;
  j["exit_code"] = exit_code;
  err << j.dump() << std::endl;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian models for populations of labelled graphs"};
  app.name("netpop");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "draw a population from a generator or model"},
      {"fit-cer", "fit the CER/CER model"},
      {"fit-sn", "fit the SN/SN model (CER/CER plug-in first)"},
      {"frechet", "sample Frechet mean of a population"},
      {"distances", "pairwise distance matrix"},
      {"mds", "classical multidimensional scaling of the distance matrix"},
      {"diagnose", "fit, then posterior predictive checks and Bayesian chi-square"},
      {"experiment", "run a simulation study"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "key = value configuration file");
    sub->add_option("--manifest", opt.manifest_path, "reuse the configuration recorded in a run manifest");
    sub->add_option("--set", opt.assignments, "override one key, e.g. --set seed=7")->allow_extra_args(false);
    sub->add_option("--input", opt.input, "population NDJSON");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what(), 1);
    return 1;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    Run run(command, build_config(opt));
    if (command == "simulate") cmd_simulate(run);
    else if (command == "fit-cer") cmd_fit(run, false);
    else if (command == "fit-sn") cmd_fit(run, true);
    else if (command == "frechet") cmd_frechet(run);
    else if (command == "distances") cmd_distances(run);
    else if (command == "mds") cmd_mds(run);
    else if (command == "diagnose") cmd_diagnose(run);
    else cmd_experiment(run);
    run.finish(out);
    return 0;
  } catch (const Error& e) {
    const int code = e.is_validation() ? 1 : 2;
    report_error(err, to_string(e.code()), e.what(), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "IoError", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "RuntimeError", e.what(), 2);
    return 2;
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("netpop");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace netpop
