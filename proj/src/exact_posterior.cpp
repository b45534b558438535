#include <algorithm>
#include <cmath>
#include <limits>

#include "netpop/error.hpp"
#include "netpop/inference.hpp"

namespace netpop {

namespace {

void check_oracle_input(const GraphPopulation& pop, const LabelledGraph& g0, const std::vector<double>& grid) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "exact posterior needs data");
  if (pop.n_vertices() != g0.n_vertices()) throw Error(ErrorCode::SizeMismatch, "prior mode and data sizes differ");
  if (g0.n_vertices() > kMaxOracleVertices)
    throw Error(ErrorCode::SpaceTooLarge, "exact posterior is limited to N <= " + std::to_string(kMaxOracleVertices));
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty parameter grid");
}

void normalise(std::vector<double>& log_probs) {
  const double z = log_sum_exp(log_probs);
  for (double& v : log_probs) v -= z;
}

}  // namespace

std::vector<double> GridPosterior::graph_marginal() const {
  std::vector<double> out(space.size(), 0.0);
  for (std::size_t g = 0; g < space.size(); ++g)
    for (std::size_t k = 0; k < grid.size(); ++k) out[g] += std::exp(log_prob(g, k));
  return out;
}

std::vector<double> GridPosterior::param_marginal() const {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < space.size(); ++g)
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] += std::exp(log_prob(g, k));
  return out;
}

GridPosterior exact_posterior_cer(const GraphPopulation& pop, const CerCerHyper& h,
                                  const std::vector<double>& alpha_grid) {
  validate(h);
  check_oracle_input(pop, h.g0, alpha_grid);
  for (double a : alpha_grid)
    if (!(a > 0.0 && a < 0.5)) throw Error(ErrorCode::DomainError, "alpha grid must lie inside (0, 0.5)");
  GridPosterior out;
  out.space = enumerate_graph_space(h.g0.n_vertices());
  out.grid = alpha_grid;
  out.log_probs.reserve(out.space.size() * alpha_grid.size());
  for (const auto& g : out.space)
    for (double a : alpha_grid) out.log_probs.push_back(cer_cer_log_target(g, a, pop, h));
  normalise(out.log_probs);
  return out;
}

GridPosterior exact_posterior_snf(const GraphPopulation& pop, const SnSnHyper& h,
                                  const std::vector<double>& gamma_grid) {
  validate(h);
  check_oracle_input(pop, h.g0, gamma_grid);
  const double upper = upper_bound(h.gamma_prior);
  for (double g : gamma_grid)
    if (!(g > 0.0 && g < upper)) throw Error(ErrorCode::DomainError, "gamma grid outside the prior support");

  GridPosterior out;
  out.space = enumerate_graph_space(h.g0.n_vertices());
  out.grid = gamma_grid;
  const std::size_t m = out.space.size();
  const double n = static_cast<double>(pop.size());

  DistanceEvaluator dist(h.metric);
  std::vector<double> phi(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) phi[a * m + b] = dist.phi(out.space[a], out.space[b]);

  std::vector<double> terms(m);
  out.log_probs.reserve(m * gamma_grid.size());
  for (std::size_t a = 0; a < m; ++a) {
    const auto& g = out.space[a];
    const double prior_phi = dist.phi(g, h.g0);
    double data_phi = 0.0;
    for (const auto& y : pop) data_phi += dist.phi(y, g);
    for (double gamma : gamma_grid) {
      for (std::size_t b = 0; b < m; ++b) terms[b] = -gamma * phi[a * m + b];
      const double log_z = log_sum_exp(terms);
      out.log_probs.push_back(-h.gamma0 * prior_phi + log_density(h.gamma_prior, gamma) - gamma * data_phi -
                              n * log_z);
    }
  }
  normalise(out.log_probs);
  return out;
}

std::vector<double> midpoint_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) throw Error(ErrorCode::InvalidConfig, "bad grid specification");
  std::vector<double> g(n);
  const double w = (hi - lo) / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = lo + (static_cast<double>(k) + 0.5) * w;
  return g;
}

double trace_mode_tv(const Trace& trace, const std::vector<LabelledGraph>& space,
                     const std::vector<double>& marginal) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "empty trace");
  std::vector<double> counts(space.size(), 0.0);
  for (const auto& s : trace.samples) {
    auto it = std::lower_bound(space.begin(), space.end(), s.mode);
    if (it == space.end() || *it != s.mode) throw Error(ErrorCode::SizeMismatch, "trace graph outside the space");
    counts[static_cast<std::size_t>(it - space.begin())] += 1.0;
  }
  double tv = 0.0;
  const double total = static_cast<double>(trace.size());
  for (std::size_t k = 0; k < space.size(); ++k) tv += std::abs(counts[k] / total - marginal[k]);
  return 0.5 * tv;
}

}  // namespace netpop
