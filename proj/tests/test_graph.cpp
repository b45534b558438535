#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "netpop/error.hpp"
#include "netpop/generators.hpp"
#include "netpop/graph.hpp"
#include "oracles.hpp"

using namespace netpop;

namespace {

AdjacencyMatrix zeros(std::size_t n) { return AdjacencyMatrix(n, std::vector<int>(n, 0)); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected netpop::Error");
  return ErrorCode::InternalInconsistency;
}

template <class F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("pair index is row-major upper triangular") {
  const std::size_t n = 5;
  std::size_t expect = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      CHECK(pair_index(n, i, j) == expect);
      CHECK(pair_from_index(n, expect) == std::make_pair(i, j));
      ++expect;
    }
  CHECK(expect == edge_slots(n));
  CHECK(edge_slots(1) == 0);
  CHECK(edge_slots(50) == 1225);
}

TEST_CASE("from_adjacency examples") {
  const auto empty = from_adjacency(zeros(3));
  CHECK(empty.edge_count() == 0);

  auto full = zeros(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) full[i][j] = i != j;
  const auto tri = from_adjacency(full);
  CHECK(tri.edge_count() == 3);
  CHECK(tri.has_edge(0, 1));
  CHECK(tri.has_edge(2, 1));

  auto bad = zeros(3);
  bad[0][1] = bad[1][0] = 2;
  CHECK(code_of([&] { from_adjacency(bad); }) == ErrorCode::NonBinaryEntry);
  CHECK(message_of([&] { from_adjacency(bad); }).find("(1,2)") != std::string::npos);

  auto asym = zeros(3);
  asym[1][2] = 1;
  CHECK(code_of([&] { from_adjacency(asym); }) == ErrorCode::NonSymmetric);
  CHECK(message_of([&] { from_adjacency(asym); }).find("(2,3)") != std::string::npos);

  auto diag = zeros(3);
  diag[2][2] = 1;
  CHECK(code_of([&] { from_adjacency(diag); }) == ErrorCode::NonZeroDiagonal);

  AdjacencyMatrix ragged{{0, 1}, {1}};
  CHECK(code_of([&] { from_adjacency(ragged); }) == ErrorCode::NonSquare);
}

TEST_CASE("adjacency round trip is the identity") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const auto g = oracle::random_graph(n, rng.uniform(), rng);
    const auto adj = to_adjacency(g);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(adj[i][i] == 0);
      for (std::size_t j = 0; j < n; ++j) CHECK(adj[i][j] == adj[j][i]);
    }
    CHECK(from_adjacency(adj) == g);
  }
}

TEST_CASE("graphs compare equal iff same N and bits") {
  LabelledGraph a(4), b(4), c(5);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  a.set_edge(0, 3);
  CHECK_FALSE(a == b);
  b.set_edge(3, 0);
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  b.set_edge(0, 3, false);
  CHECK(b.edge_count() == 0);
  CHECK(code_of([&] { b.set_edge(2, 2); }) == ErrorCode::NonZeroDiagonal);
}

TEST_CASE("degrees and edges agree") {
  Rng rng(3);
  const auto g = oracle::random_graph(9, 0.4, rng);
  const auto deg = g.degrees();
  CHECK(std::accumulate(deg.begin(), deg.end(), std::size_t{0}) == 2 * g.edge_count());
  const auto edges = g.edges();
  CHECK(edges.size() == g.edge_count());
  for (std::size_t k = 1; k < edges.size(); ++k)
    CHECK(pair_index(9, edges[k - 1].first, edges[k - 1].second) < pair_index(9, edges[k].first, edges[k].second));
}

TEST_CASE("multi-word bit sets") {
  LabelledGraph g(50);
  g.set_edge(48, 49);
  g.set_edge(0, 1);
  CHECK(g.words().size() == (1225 + 63) / 64);
  CHECK(g.edge_count() == 2);
  CHECK(g.bit(1224));
  g.flip_bit(1224);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("enumerate_graph_space") {
  CHECK(enumerate_graph_space(1).size() == 1);
  CHECK(enumerate_graph_space(2).size() == 2);
  const auto four = enumerate_graph_space(4);
  CHECK(four.size() == 64);
  CHECK(std::set<LabelledGraph>(four.begin(), four.end()).size() == 64);
  CHECK(std::is_sorted(four.begin(), four.end()));
  CHECK(four.front().edge_count() == 0);
  CHECK(four.back().edge_count() == 6);
  const auto five = enumerate_graph_space(5);
  CHECK(five.size() == 1024);
  CHECK(std::set<LabelledGraph>(five.begin(), five.end()).size() == 1024);
  CHECK(code_of([] { enumerate_graph_space(6); }) == ErrorCode::SpaceTooLarge);
}

TEST_CASE("population requires a common vertex count") {
  GraphPopulation pop;
  CHECK(pop.n_vertices() == 0);
  pop.add(LabelledGraph(4), "a");
  pop.add(LabelledGraph(4));
  CHECK(pop.size() == 2);
  CHECK(pop.id(0) == std::optional<std::string>("a"));
  CHECK_FALSE(pop.id(1).has_value());
  CHECK(code_of([&] { pop.add(LabelledGraph(5)); }) == ErrorCode::SchemaError);
  CHECK(pop.slice(1, 5).size() == 1);
}

TEST_CASE("majority vote examples") {
  Rng rng(5);
  const auto g = oracle::random_graph(6, 0.5, rng);
  CHECK(majority_vote(GraphPopulation({g, g, g})) == g);

  LabelledGraph a(3), b(3), c(3);
  a.set_edge(0, 1);
  b.set_edge(0, 1);
  const auto mv = majority_vote(GraphPopulation({a, b, c}));
  CHECK(mv.has_edge(0, 1));
  CHECK(mv.edge_count() == 1);

  CHECK(majority_vote(GraphPopulation({a, c})).edge_count() == 0);
  CHECK(code_of([] { majority_vote(GraphPopulation{}); }) == ErrorCode::EmptyPopulation);
}

TEST_CASE("majority vote matches per-entry counts") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_members = 1 + rng.below(8);
    const std::size_t n = 2 + rng.below(8);
    GraphPopulation pop;
    for (std::size_t k = 0; k < n_members; ++k) pop.add(oracle::random_graph(n, 0.5, rng));
    const auto mv = majority_vote(pop);
    const auto freq = edge_frequencies(pop);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::size_t count = 0;
        for (const auto& g : pop) count += to_adjacency(g)[i][j];
        CHECK(mv.has_edge(i, j) == (2 * count > n_members));
        CHECK(freq[pair_index(n, i, j)] == doctest::Approx(double(count) / double(n_members)));
      }
  }
}

TEST_CASE("majority vote is permutation equivariant") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
    GraphPopulation pop, relabelled;
    const std::size_t members = 1 + rng.below(7);
    for (std::size_t k = 0; k < members; ++k) {
      const auto g = oracle::random_graph(n, 0.5, rng);
      pop.add(g);
      relabelled.add(relabel(g, perm));
    }
    CHECK(majority_vote(relabelled) == relabel(majority_vote(pop), perm));
  }
}

TEST_CASE("generator specs validate") {
  CHECK_THROWS_AS(validate(GeneratorSpec{ErdosRenyiSpec{1.5}}), Error);
  CHECK_THROWS_AS(validate(GeneratorSpec{BlockModelSpec{0, {}, 0.1, 0.1}}), Error);
  CHECK_THROWS_AS(validate(GeneratorSpec{BlockModelSpec{2, {0.5, 0.6}, 0.1, 0.1}}), Error);
  CHECK_THROWS_AS(validate(GeneratorSpec{SmallWorldSpec{3, 0.1}}), Error);
  CHECK_THROWS_AS(validate(GeneratorSpec{GeometricSpec{-1.0}}), Error);
  CHECK_NOTHROW(validate(GeneratorSpec{BlockModelSpec{}}));
  for (const char* name : {"ER", "SBM", "SW", "RGG"}) CHECK(generator_name(default_generator(name)) == name);
}

TEST_CASE("ER extremes") {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    CHECK(sample_generator(ErdosRenyiSpec{0.0}, 12, rng).edge_count() == 0);
    CHECK(sample_generator(ErdosRenyiSpec{1.0}, 12, rng).edge_count() == edge_slots(12));
  }
}

TEST_CASE("ER edge count and per-position frequency") {
  Rng rng(2024);
  const std::size_t n = 50, draws = 10000;
  const double p = 0.1;
  const std::size_t slots = edge_slots(n);
  std::vector<std::size_t> hits(slots, 0);
  double total = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    const auto g = sample_generator(ErdosRenyiSpec{p}, n, rng);
    total += static_cast<double>(g.edge_count());
    for (std::size_t pos = 0; pos < slots; ++pos) hits[pos] += g.bit(pos);
  }
  const double mean = total / draws;
  const double sd_of_mean = std::sqrt(slots * p * (1 - p) / draws);
  CHECK(std::abs(mean - slots * p) < 3 * sd_of_mean);

  // binomial 99.9% band per position, allow a handful of excursions
  const double half = 3.29 * std::sqrt(p * (1 - p) / draws);
  std::size_t outside = 0;
  for (auto h : hits) outside += std::abs(double(h) / draws - p) > half;
  CHECK(outside <= 6);
}

TEST_CASE("SBM draws stay within range and respect extremes") {
  Rng rng(8);
  const BlockModelSpec none{2, {0.5, 0.5}, 0.0, 0.0};
  CHECK(sample_generator(none, 20, rng).edge_count() == 0);
  const BlockModelSpec all{2, {0.5, 0.5}, 1.0, 1.0};
  CHECK(sample_generator(all, 20, rng).edge_count() == edge_slots(20));
  // one block behaves as ER with the within probability
  const BlockModelSpec single{1, {1.0}, 0.3, 0.9};
  double total = 0.0;
  for (int k = 0; k < 2000; ++k) total += sample_generator(single, 20, rng).edge_count();
  CHECK(total / 2000 == doctest::Approx(190 * 0.3).epsilon(0.03));
}

TEST_CASE("SW keeps the edge count and avoids duplicates") {
  Rng rng(9);
  for (std::size_t degree : {2u, 4u}) {
    const auto lattice = sample_generator(SmallWorldSpec{degree, 0.0}, 12, rng);
    CHECK(lattice.edge_count() == 12 * degree / 2);
    for (auto d : lattice.degrees()) CHECK(d == degree);
    for (int k = 0; k < 50; ++k) CHECK(sample_generator(SmallWorldSpec{degree, 0.5}, 12, rng).edge_count() == 12 * degree / 2);
  }
}

TEST_CASE("RGG radius extremes") {
  Rng rng(10);
  CHECK(sample_generator(GeometricSpec{0.0}, 15, rng).edge_count() == 0);
  CHECK(sample_generator(GeometricSpec{1.5}, 15, rng).edge_count() == edge_slots(15));
}

TEST_CASE("generators are reproducible from the seed") {
  for (const char* name : {"ER", "SBM", "SW", "RGG"}) {
    Rng a(77), b(77);
    CHECK(sample_generator(default_generator(name), 30, a) == sample_generator(default_generator(name), 30, b));
  }
}
