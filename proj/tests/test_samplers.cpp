#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "netpop/error.hpp"
#include "netpop/generators.hpp"
#include "netpop/inference.hpp"
#include "netpop/stats.hpp"
#include "oracles.hpp"

using namespace netpop;

namespace {

LabelledGraph path3() {
  LabelledGraph g(3);
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  return g;
}

GraphPopulation cer_data(const LabelledGraph& truth, double alpha, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  GraphPopulation pop;
  for (std::size_t k = 0; k < n; ++k) pop.add(cer_sample(CerParams{truth, alpha}, rng));
  return pop;
}

McmcConfig oracle_config(std::size_t samples, std::uint64_t seed) {
  auto cfg = McmcConfig::with_lengths(samples, 5000, 1);
  cfg.seed = seed;
  return cfg;
}

std::vector<double> empirical_marginal(const Trace& t, const std::vector<LabelledGraph>& space) {
  std::vector<double> p(space.size(), 0.0);
  for (const auto& s : t.samples) p[std::lower_bound(space.begin(), space.end(), s.mode) - space.begin()] += 1.0;
  for (double& v : p) v /= static_cast<double>(t.size());
  return p;
}

}  // namespace

TEST_CASE("grid helpers") {
  const auto g = midpoint_grid(0.0, 1.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(0.125));
  CHECK(g[3] == doctest::Approx(0.875));
}

TEST_CASE("exact CER posterior") {
  const auto pop = cer_data(path3(), 0.1, 5, 301);
  const CerCerHyper h{LabelledGraph(3), 0.01, 1.0, 9.0};
  const auto post = exact_posterior_cer(pop, h, midpoint_grid(0.0, 0.5, 500));
  CHECK(std::abs(log_sum_exp(post.log_probs)) < 1e-10);
  const auto gm = post.graph_marginal();
  double s = 0.0;
  for (double v : gm) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));

  // a single grid node gives the conditional posterior over graphs
  const auto one = exact_posterior_cer(pop, h, {0.2});
  std::vector<double> lt;
  for (const auto& g : one.space) lt.push_back(cer_cer_log_target(g, 0.2, pop, h));
  const double z = log_sum_exp(lt);
  for (std::size_t k = 0; k < lt.size(); ++k) CHECK(one.log_prob(k, 0) == doctest::Approx(lt[k] - z).epsilon(1e-12));

  GraphPopulation big;
  big.add(LabelledGraph(5));
  CHECK_THROWS_AS(exact_posterior_cer(big, CerCerHyper{LabelledGraph(5), 0.01, 1, 9}, {0.2}), Error);
}

TEST_CASE("exact CER posterior argmax is the sample Frechet mean for large n") {
  Rng rng(302);
  const auto truth = oracle::random_graph(4, 0.5, rng);
  const auto pop = cer_data(truth, 0.25, 50, 303);
  const CerCerHyper h{truth, 0.01, 1.0, 9.0};
  const auto post = exact_posterior_cer(pop, h, midpoint_grid(0.0, 0.5, 400));
  const auto gm = post.graph_marginal();
  const auto best = std::max_element(gm.begin(), gm.end()) - gm.begin();
  CHECK(post.space[static_cast<std::size_t>(best)] == sample_frechet_mean(pop, MetricSpec::hamming()));
}

TEST_CASE("exact SNF posterior") {
  const auto pop = cer_data(path3(), 0.15, 5, 304);
  const SnSnHyper h{LabelledGraph(3), 0.01, MetricSpec::hamming(), ExponentialPrior{1.0}};
  const auto grid = midpoint_grid(0.0, 20.0, 800);
  const auto post = exact_posterior_snf(pop, h, grid);
  CHECK(std::abs(log_sum_exp(post.log_probs)) < 1e-10);

  // under Hamming Z does not depend on the mode, so dropping it leaves the
  // graph marginal unchanged
  std::vector<double> lt;
  for (std::size_t g = 0; g < post.space.size(); ++g)
    for (double gamma : grid) {
      double v = -h.gamma0 * double(hamming(post.space[g], h.g0)) + log_density(h.gamma_prior, gamma) -
                 double(pop.size()) * snf_log_partition_hamming(3, gamma, Phi::Identity);
      for (const auto& y : pop) v -= gamma * double(hamming(y, post.space[g]));
      lt.push_back(v);
    }
  const double z = log_sum_exp(lt);
  for (std::size_t k = 0; k < lt.size(); ++k) CHECK(post.log_probs[k] == doctest::Approx(lt[k] - z).epsilon(1e-9));
}

TEST_CASE("exact SNF posterior concentrates on the truth with many observations") {
  Rng rng(305);
  const auto truth = oracle::random_graph(4, 0.5, rng);
  const auto pop = sample_snf(SnfParams{truth, 8.0, MetricSpec::diffusion(1.0)}, 100, 300, rng);
  const SnSnHyper h{LabelledGraph(4), 0.01, MetricSpec::diffusion(1.0), ExponentialPrior{1.0}};
  const auto gm = exact_posterior_snf(pop, h, midpoint_grid(0.0, 40.0, 400)).graph_marginal();
  const auto space = enumerate_graph_space(4);
  const auto it = std::lower_bound(space.begin(), space.end(), truth);
  CHECK(gm[static_cast<std::size_t>(it - space.begin())] > 0.95);
}

TEST_CASE("CER/CER sampler matches the enumeration oracle at N=3") {
  const auto pop = cer_data(path3(), 0.1, 5, 306);
  const CerCerHyper h{LabelledGraph(3), 0.01, 1.0, 9.0};
  const auto trace = fit_cer_cer(pop, h, oracle_config(100000, 307));
  REQUIRE(trace.size() == 100000);
  const auto post = exact_posterior_cer(pop, h, midpoint_grid(0.0, 0.5, 2000));
  const auto gm = post.graph_marginal();
  CHECK(trace_mode_tv(trace, post.space, gm) <= 0.05);
  CHECK(oracle::total_variation(empirical_marginal(trace, post.space), gm) <= 0.05);

  // posterior mean of alpha
  const auto pm = post.param_marginal();
  double exact_mean = 0.0;
  for (std::size_t k = 0; k < pm.size(); ++k) exact_mean += pm[k] * post.grid[k];
  CHECK(mean(trace.params()) == doctest::Approx(exact_mean).epsilon(0.05));

  for (const auto& s : trace.samples) {
    REQUIRE(s.param > 0.0);
    REQUIRE(s.param < 0.5);
  }
}

TEST_CASE("CER/CER posterior on replicated data") {
  Rng rng(308);
  const auto g = oracle::random_graph(4, 0.5, rng);
  GraphPopulation pop;
  for (int k = 0; k < 10; ++k) pop.add(g);
  const CerCerHyper h{LabelledGraph(4), 0.01, 1.0, 9.0};
  const auto post = exact_posterior_cer(pop, h, midpoint_grid(0.0, 0.5, 500));
  const auto gm = post.graph_marginal();
  CHECK(post.space[static_cast<std::size_t>(std::max_element(gm.begin(), gm.end()) - gm.begin())] == g);
  auto cfg = McmcConfig::with_lengths(2000, 2000, 2);
  const auto trace = fit_cer_cer(pop, h, cfg);
  CHECK(posterior_summary(trace).mode == g);
}

TEST_CASE("CER/CER acceptance counters and trace layout") {
  Rng rng(309);
  const auto truth = sample_generator(ErdosRenyiSpec{0.1}, 20, rng);
  const auto pop = cer_data(truth, 0.05, 10, 310);
  auto cfg = McmcConfig::with_lengths(100, 9000, 10);
  const auto trace = fit_cer_cer(pop, CerCerHyper{LabelledGraph(20), 0.01, 1.0, 9.0}, cfg);
  CHECK(trace.model == "cer-cer");
  CHECK(trace.size() == 100);
  CHECK(trace.samples.front().iter == 9010);
  CHECK(trace.samples.back().iter == 10000);
  REQUIRE(trace.counters.size() == 3);
  CHECK(trace.counters[0].name == "flip");
  CHECK(trace.counters[1].name == "empirical");
  CHECK(trace.counters[2].name == "alpha");
  CHECK(trace.counters[0].rate() > 0.0);
  CHECK(trace.counters[0].rate() < 1.0);
  CHECK(trace.counters[0].proposed + trace.counters[1].proposed == 10000);
  CHECK(trace.counters[2].proposed == 10000);
  for (const auto& s : trace.samples)
    CHECK(s.log_kernel == doctest::Approx(cer_cer_log_target(s.mode, s.param, pop, CerCerHyper{LabelledGraph(20), 0.01, 1.0, 9.0})));
}

TEST_CASE("samplers are deterministic under the seed") {
  const auto pop = cer_data(path3(), 0.1, 5, 311);
  const CerCerHyper ch{LabelledGraph(3), 0.01, 1.0, 9.0};
  auto cfg = McmcConfig::with_lengths(300, 200, 2);
  cfg.seed = 99;
  const auto a = fit_cer_cer(pop, ch, cfg);
  const auto b = fit_cer_cer(pop, ch, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.samples[k].mode == b.samples[k].mode);
    CHECK(a.samples[k].param == b.samples[k].param);
    CHECK(a.samples[k].log_kernel == b.samples[k].log_kernel);
  }
  CHECK(a.counters == b.counters);

  const SnSnHyper sh{LabelledGraph(3), 0.01, MetricSpec::diffusion(1.0), ExponentialPrior{1.0}};
  const auto c = fit_sn_sn(pop, sh, cfg, 0.2);
  const auto d = fit_sn_sn(pop, sh, cfg, 0.2);
  for (std::size_t k = 0; k < c.size(); ++k) {
    CHECK(c.samples[k].mode == d.samples[k].mode);
    CHECK(c.samples[k].param == d.samples[k].param);
  }
  cfg.seed = 100;
  const auto e = fit_cer_cer(pop, ch, cfg);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) differs |= a.samples[k].param != e.samples[k].param;
  CHECK(differs);
}

TEST_CASE("SNF prior sampler") {
  Rng rng(312);
  const auto g0 = oracle::random_graph(4, 0.5, rng);
  const SnSnHyper peaked{g0, 50.0, MetricSpec::hamming(), ExponentialPrior{}};
  const auto t1 = sample_snf_prior_mh(peaked, McmcConfig::with_lengths(5000, 100, 1), rng);
  std::size_t at_mode = 0;
  for (const auto& s : t1.samples) at_mode += s.mode == g0;
  CHECK(double(at_mode) / double(t1.size()) > 0.99);

  for (const auto& metric : {MetricSpec::hamming(), MetricSpec::diffusion(1.0)}) {
    const SnSnHyper h{g0, 0.8, metric, ExponentialPrior{}};
    const auto t = sample_snf_prior_mh(h, McmcConfig::with_lengths(100000, 1000, 1), rng);
    const auto exact = snf_exact(SnfParams{g0, 0.8, metric});
    std::vector<double> probs;
    for (std::size_t k = 0; k < exact.space.size(); ++k) probs.push_back(exact.probability(k));
    CHECK(trace_mode_tv(t, exact.space, probs) <= 0.05);
  }

  const SnSnHyper flat{LabelledGraph(12), 1e-8, MetricSpec::hamming(), ExponentialPrior{}};
  const auto t3 = sample_snf_prior_mh(flat, McmcConfig::with_lengths(5000, 1000, 5), rng);
  double density = 0.0;
  for (const auto& s : t3.samples) density += double(s.mode.edge_count()) / double(s.mode.n_slots());
  CHECK(density / double(t3.size()) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("sample_snf draws match the exact law") {
  Rng rng(313);
  const SnfParams p{path3(), 1.2, MetricSpec::diffusion(0.5)};
  const auto pop = sample_snf(p, 40000, 60, rng);
  const auto exact = snf_exact(p);
  std::vector<double> emp(exact.space.size(), 0.0), probs;
  for (const auto& g : pop) emp[exact.index_of(g)] += 1.0 / double(pop.size());
  for (std::size_t k = 0; k < exact.space.size(); ++k) probs.push_back(exact.probability(k));
  CHECK(oracle::total_variation(emp, probs) <= 0.02);
}

namespace {

struct SnOracleRun {
  double tv;
  double exact_gamma_mean;
  double gamma_mean;
};

SnOracleRun sn_oracle(const MetricSpec& metric, std::size_t inner, std::uint64_t seed) {
  Rng rng(314);
  const auto pop = sample_snf(SnfParams{path3(), 1.0, metric}, 5, 200, rng);
  const SnSnHyper h{LabelledGraph(3), 0.01, metric, ExponentialPrior{1.0}};
  auto cfg = oracle_config(100000, seed);
  cfg.step_sizes_upsilon = {0.1, 0.5, 1.5};
  cfg.aux_inner_steps = inner;
  const auto trace = fit_sn_sn(pop, h, cfg, 0.2);
  const auto post = exact_posterior_snf(pop, h, midpoint_grid(0.0, 40.0, 4000));
  const auto pm = post.param_marginal();
  double em = 0.0;
  for (std::size_t k = 0; k < pm.size(); ++k) em += pm[k] * post.grid[k];
  for (const auto& s : trace.samples) REQUIRE(s.param > 0.0);
  return {trace_mode_tv(trace, post.space, post.graph_marginal()), em, mean(trace.params())};
}

}  // namespace

TEST_CASE("SN/SN sampler matches the enumeration oracle at N=3 (Hamming)") {
  const auto base = sn_oracle(MetricSpec::hamming(), 60, 315);
  CHECK(base.tv <= 0.10);
  CHECK(base.gamma_mean == doctest::Approx(base.exact_gamma_mean).epsilon(0.1));
  const auto doubled = sn_oracle(MetricSpec::hamming(), 120, 315);
  CHECK(std::abs(doubled.tv - base.tv) < 0.03);
}

TEST_CASE("SN/SN sampler matches the enumeration oracle at N=3 (diffusion)") {
  const auto base = sn_oracle(MetricSpec::diffusion(1.0), 60, 316);
  CHECK(base.tv <= 0.10);
  CHECK(base.gamma_mean == doctest::Approx(base.exact_gamma_mean).epsilon(0.1));
}

TEST_CASE("SN/SN with a matched prior agrees with CER/CER") {
  const auto pop = cer_data(path3(), 0.15, 5, 317);
  const double alpha0 = 0.1;
  const CerCerHyper ch{LabelledGraph(3), alpha0, 1.0, 9.0};
  const SnSnHyper sh{LabelledGraph(3), cer_to_snf_gamma(alpha0), MetricSpec::hamming(), MatchedScaledBetaPrior{1.0, 9.0}};
  const auto cer = fit_cer_cer(pop, ch, oracle_config(50000, 318));
  auto cfg = oracle_config(50000, 319);
  cfg.step_sizes_upsilon = {0.1, 0.5, 1.5};
  const auto sn = fit_sn_sn(pop, sh, cfg, 0.2);
  const auto space = enumerate_graph_space(3);
  CHECK(oracle::total_variation(empirical_marginal(cer, space), empirical_marginal(sn, space)) <= 0.1);

  // the exact posteriors coincide
  const auto pc = exact_posterior_cer(pop, ch, midpoint_grid(0.0, 0.5, 2000)).graph_marginal();
  const auto ps = exact_posterior_snf(pop, sh, midpoint_grid(0.0, 40.0, 8000)).graph_marginal();
  CHECK(oracle::total_variation(pc, ps) < 0.01);
}

TEST_CASE("SN/SN gamma respects a truncated prior") {
  const auto pop = cer_data(path3(), 0.05, 5, 320);
  const SnSnHyper h{LabelledGraph(3), 0.01, MetricSpec::hamming(), TruncatedUniformPrior{3.0}};
  auto cfg = McmcConfig::with_lengths(3000, 500, 1);
  cfg.step_sizes_upsilon = {0.5, 2.0};
  const auto trace = fit_sn_sn(pop, h, cfg, 0.1);
  for (const auto& s : trace.samples) {
    REQUIRE(s.param > 0.0);
    REQUIRE(s.param < 3.0);
  }
  cfg.step_sizes_upsilon = {3.5};
  CHECK_THROWS_AS(fit_sn_sn(pop, h, cfg, 0.1), Error);
  CHECK_THROWS_AS(fit_sn_sn(pop, h, McmcConfig::with_lengths(10, 10, 1), 0.5), Error);
}

TEST_CASE("SN/SN trace layout") {
  const auto pop = cer_data(path3(), 0.1, 4, 321);
  const SnSnHyper h{LabelledGraph(3), 0.01, MetricSpec::hamming(), ExponentialPrior{}};
  const auto trace = fit_sn_sn(pop, h, McmcConfig::with_lengths(50, 100, 3), 0.1);
  CHECK(trace.model == "sn-sn");
  CHECK(trace.size() == 50);
  REQUIRE(trace.counters.size() == 3);
  CHECK(trace.counters[2].name == "gamma");
  CHECK(trace.counters[2].proposed == 250);
  // log kernel excludes Z: prior on mode + prior on gamma - gamma * data sum
  for (const auto& s : trace.samples) {
    double v = -h.gamma0 * double(hamming(s.mode, h.g0)) + log_density(h.gamma_prior, s.param);
    for (const auto& y : pop) v -= s.param * double(hamming(y, s.mode));
    CHECK(s.log_kernel == doctest::Approx(v));
  }
}

TEST_CASE("posterior summary") {
  Trace same;
  const auto g = path3();
  for (int k = 0; k < 10; ++k) same.samples.push_back({std::size_t(k), g, 0.1 * (k + 1), 0.0});
  const auto s = posterior_summary(same, 0.8);
  CHECK(s.mode == g);
  REQUIRE(s.frequencies.size() == 1);
  CHECK(s.frequencies[0].second == 1.0);
  CHECK(s.param_mean == doctest::Approx(0.55));
  CHECK(s.lower == doctest::Approx(quantile(same.params(), 0.1)));
  CHECK(s.upper == doctest::Approx(quantile(same.params(), 0.9)));
  CHECK(s.lower == doctest::Approx(0.19));
  CHECK(s.upper == doctest::Approx(0.91));

  Trace mixed;
  Rng rng(322);
  for (int k = 0; k < 200; ++k) mixed.samples.push_back({std::size_t(k), oracle::random_graph(3, 0.5, rng), rng.uniform(), 0.0});
  const auto m = posterior_summary(mixed);
  double total = 0.0;
  for (std::size_t k = 0; k < m.frequencies.size(); ++k) {
    total += m.frequencies[k].second;
    if (k > 0) CHECK(m.frequencies[k].second <= m.frequencies[k - 1].second);
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(m.mode == m.frequencies[0].first);

  Trace tie;
  LabelledGraph a(3), b(3);
  b.set_edge(0, 2);
  tie.samples = {{1, b, 0.1, 0.0}, {2, a, 0.2, 0.0}};
  CHECK(posterior_summary(tie).mode == a);

  CHECK_THROWS_AS(posterior_summary(Trace{}), Error);
  CHECK_THROWS_AS(posterior_summary(same, 1.0), Error);
}

TEST_CASE("divide and conquer degenerate splits") {
  const auto pop = cer_data(path3(), 0.1, 6, 323);
  const SnSnHyper h{LabelledGraph(3), 0.01, MetricSpec::hamming(), ExponentialPrior{}};
  auto cfg = McmcConfig::with_lengths(200, 200, 1);
  cfg.seed = 5;
  const auto single = divide_and_conquer_fit(pop, h, cfg, 1, 0.1);
  const auto direct = fit_sn_sn(pop, h, cfg, 0.1);
  CHECK(single.mode == posterior_summary(direct).mode);
  REQUIRE(single.gamma_samples.size() == direct.size());
  CHECK(mean(single.gamma_samples) == doctest::Approx(mean(direct.params())));
  CHECK(std::sqrt(variance(single.gamma_samples)) == doctest::Approx(std::sqrt(variance(direct.params()))));

  GraphPopulation copies;
  for (int k = 0; k < 6; ++k) copies.add(path3());
  const auto split = divide_and_conquer_fit(copies, h, cfg, 3, 0.1);
  for (const auto& m : split.subset_modes) CHECK(m == path3());
  CHECK(split.mode == path3());
  CHECK(split.gamma_samples.size() == 3 * 200);

  CHECK_THROWS_AS(divide_and_conquer_fit(pop, h, cfg, 4, 0.1), Error);
  try {
    divide_and_conquer_fit(pop, h, cfg, 4, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndivisiblePopulation);
  }
}

TEST_CASE("divide and conquer gamma draws have the target dispersion") {
  const auto pop = cer_data(path3(), 0.1, 8, 324);
  const SnSnHyper h{LabelledGraph(3), 0.01, MetricSpec::hamming(), ExponentialPrior{}};
  auto cfg = McmcConfig::with_lengths(400, 200, 1);
  const auto r = divide_and_conquer_fit(pop, h, cfg, 4, 0.1, 2);
  double pooled = 0.0, centre = 0.0;
  for (const auto& t : r.subset_traces) {
    pooled += variance(t.params());
    centre += mean(t.params());
  }
  pooled = std::sqrt(pooled / 4.0);
  CHECK(mean(r.gamma_samples) == doctest::Approx(centre / 4.0));
  // each subset block is rescaled to pooled / sqrt(4)
  for (std::size_t k = 0; k < 4; ++k) {
    const std::vector<double> block(r.gamma_samples.begin() + long(k * 400), r.gamma_samples.begin() + long((k + 1) * 400));
    CHECK(std::sqrt(variance(block)) == doctest::Approx(pooled / 2.0));
  }
}

TEST_CASE("divide and conquer recovers the mode at N=10") {
  std::size_t close = 0;
  const std::size_t reps = 20;
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(split_seed(325, r));
    const auto truth = sample_generator(ErdosRenyiSpec{0.3}, 10, rng);
    const auto pop = sample_snf(SnfParams{truth, 1.5, MetricSpec::hamming()}, 60, 450, rng);
    const SnSnHyper h{LabelledGraph(10), 0.01, MetricSpec::hamming(), ExponentialPrior{}};
    auto cfg = McmcConfig::with_lengths(150, 300, 1);
    cfg.step_sizes_upsilon = {0.1, 0.5, 1.0};
    cfg.aux_inner_steps = 90;
    cfg.seed = split_seed(326, r);
    const auto fit = divide_and_conquer_fit(pop, h, cfg, 10, 0.2);
    close += hamming(fit.mode, truth) <= 2;
  }
  CHECK(close >= 18);
}
