#include "netpop/generators.hpp"

#include <cmath>
#include <numeric>

#include "netpop/error.hpp"

namespace netpop {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " must lie in [0,1], got " + std::to_string(p));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

LabelledGraph sample_er(const ErdosRenyiSpec& s, std::size_t n, Rng& rng) {
  LabelledGraph g(n);
  const std::size_t slots = g.n_slots();
  if (s.p <= 0.0) return g;
  for (std::size_t pos = rng.geometric(s.p); pos < slots; pos += 1 + rng.geometric(s.p)) g.set_bit(pos, true);
  return g;
}

LabelledGraph sample_sbm(const BlockModelSpec& s, std::size_t n, Rng& rng) {
  std::vector<std::size_t> block(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t k = 0;
    for (; k + 1 < s.blocks; ++k) {
      acc += s.membership_probs[k];
      if (u < acc) break;
    }
    block[v] = k;
  }
  LabelledGraph g(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++pos)
      if (rng.bernoulli(block[i] == block[j] ? s.within_p : s.between_p)) g.set_bit(pos, true);
  return g;
}

LabelledGraph sample_sw(const SmallWorldSpec& s, std::size_t n, Rng& rng) {
  LabelledGraph g(n);
  const std::size_t half = s.lattice_degree / 2;
  if (n < 2 || half == 0) return g;
  // lattice edges in canonical order (i, i+1), (i, i+2), ...
  std::vector<std::pair<std::size_t, std::size_t>> lattice;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= half; ++k) {
      const std::size_t j = (i + k) % n;
      if (j == i || g.has_edge(i, j)) continue;
      g.set_edge(i, j);
      lattice.emplace_back(i, j);
    }
  }
  for (auto [i, j] : lattice) {
    if (!rng.bernoulli(s.rewire_p)) continue;
    std::vector<std::size_t> targets;
    for (std::size_t w = 0; w < n; ++w)
      if (w != i && !g.has_edge(i, w)) targets.push_back(w);
    if (targets.empty()) continue;
    const std::size_t w = targets[rng.below(targets.size())];
    g.set_edge(i, j, false);
    g.set_edge(i, w, true);
  }
  return g;
}

LabelledGraph sample_rgg(const GeometricSpec& s, std::size_t n, Rng& rng) {
  std::vector<double> x(n), y(n);
  for (std::size_t v = 0; v < n; ++v) {
    x[v] = rng.uniform();
    y[v] = rng.uniform();
  }
  LabelledGraph g(n);
  const double r2 = s.radius * s.radius;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++pos) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx * dx + dy * dy <= r2) g.set_bit(pos, true);
    }
  return g;
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  std::visit(overloaded{
                 [](const ErdosRenyiSpec& s) { check_probability(s.p, "ER inclusion probability"); },
                 [](const BlockModelSpec& s) {
                   if (s.blocks < 1) throw Error(ErrorCode::InvalidSpec, "SBM needs K >= 1");
                   if (s.membership_probs.size() != s.blocks)
                     throw Error(ErrorCode::InvalidSpec, "SBM needs one membership probability per block");
                   for (double p : s.membership_probs) check_probability(p, "SBM membership probability");
                   const double total = std::accumulate(s.membership_probs.begin(), s.membership_probs.end(), 0.0);
                   if (std::abs(total - 1.0) > 1e-9)
                     throw Error(ErrorCode::InvalidSpec, "SBM membership probabilities sum to " + std::to_string(total));
                   check_probability(s.within_p, "SBM within-block probability");
                   check_probability(s.between_p, "SBM between-block probability");
                 },
                 [](const SmallWorldSpec& s) {
                   if (s.lattice_degree % 2 != 0)
                     throw Error(ErrorCode::InvalidSpec, "SW lattice degree must be even");
                   check_probability(s.rewire_p, "SW rewiring probability");
                 },
                 [](const GeometricSpec& s) {
                   if (!(s.radius >= 0.0) || !std::isfinite(s.radius))
                     throw Error(ErrorCode::InvalidSpec, "RGG radius must be a finite non-negative number");
                 },
             },
             spec);
}

std::string generator_name(const GeneratorSpec& spec) {
  return std::visit(overloaded{
                        [](const ErdosRenyiSpec&) { return std::string("ER"); },
                        [](const BlockModelSpec&) { return std::string("SBM"); },
                        [](const SmallWorldSpec&) { return std::string("SW"); },
                        [](const GeometricSpec&) { return std::string("RGG"); },
                    },
                    spec);
}

GeneratorSpec default_generator(const std::string& name) {
  if (name == "ER") return ErdosRenyiSpec{};
  if (name == "SBM") return BlockModelSpec{};
  if (name == "SW") return SmallWorldSpec{};
  if (name == "RGG") return GeometricSpec{};
  throw Error(ErrorCode::InvalidSpec, "unknown generator \"" + name + "\" (expected ER, SBM, SW or RGG)");
}

LabelledGraph sample_generator(const GeneratorSpec& spec, std::size_t n_vertices, Rng& rng) {
  validate(spec);
  if (n_vertices < 1) throw Error(ErrorCode::InvalidSpec, "generator needs N >= 1");
  return std::visit(overloaded{
                        [&](const ErdosRenyiSpec& s) { return sample_er(s, n_vertices, rng); },
                        [&](const BlockModelSpec& s) { return sample_sbm(s, n_vertices, rng); },
                        [&](const SmallWorldSpec& s) { return sample_sw(s, n_vertices, rng); },
                        [&](const GeometricSpec& s) { return sample_rgg(s, n_vertices, rng); },
                    },
                    spec);
}

}  // namespace netpop
