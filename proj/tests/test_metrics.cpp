#include <doctest.h>

#include <cmath>

#include "netpop/error.hpp"
#include "netpop/generators.hpp"
#include "netpop/metrics.hpp"
#include "oracles.hpp"

using namespace netpop;

namespace {

LabelledGraph complete(std::size_t n) {
  LabelledGraph g(n);
  for (std::size_t p = 0; p < g.n_slots(); ++p) g.set_bit(p, true);
  return g;
}

LabelledGraph single_edge() {
  LabelledGraph g(2);
  g.set_edge(0, 1);
  return g;
}

}  // namespace

TEST_CASE("hamming examples") {
  Rng rng(4);
  const auto g = oracle::random_graph(7, 0.5, rng);
  CHECK(hamming(g, g) == 0);
  CHECK(hamming(LabelledGraph(3), complete(3)) == 3);
  for (int k = 0; k < 200; ++k) {
    const auto a = oracle::random_graph(5, 0.5, rng);
    const auto b = oracle::random_graph(5, 0.5, rng);
    CHECK(hamming(a, b) == oracle::hamming(a, b));
  }
  CHECK_THROWS_AS(hamming(LabelledGraph(3), LabelledGraph(4)), Error);
}

TEST_CASE("hamming on multi-word graphs matches the oracle") {
  Rng rng(41);
  for (int k = 0; k < 20; ++k) {
    const auto a = oracle::random_graph(40, 0.3, rng);
    const auto b = oracle::random_graph(40, 0.3, rng);
    CHECK(hamming(a, b) == oracle::hamming(a, b));
  }
}

TEST_CASE("laplacian examples") {
  CHECK(laplacian(LabelledGraph(4)).isZero());
  Matrix expect(2, 2);
  expect << 1, -1, -1, 1;
  CHECK(laplacian(single_edge()).isApprox(expect));
  const Matrix tri = laplacian(complete(3));
  for (int i = 0; i < 3; ++i) {
    CHECK(tri(i, i) == 2.0);
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(tri(i, j) == -1.0);
    CHECK(tri.row(i).sum() == 0.0);
  }
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const auto g = oracle::random_graph(8, 0.4, rng);
    CHECK((laplacian(g) - oracle::laplacian(g)).norm() == 0.0);
  }
}

TEST_CASE("heat kernel examples") {
  for (double t : {0.1, 1.0, 7.5}) CHECK(heat_kernel(LabelledGraph(4), t).isIdentity(1e-14));
  const double e = std::exp(-2.0);
  Matrix expect(2, 2);
  expect << 1 + e, 1 - e, 1 - e, 1 + e;
  expect *= 0.5;
  CHECK((heat_kernel(single_edge(), 1.0) - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(heat_kernel(single_edge(), 0.0), Error);
  CHECK_THROWS_AS(heat_kernel(single_edge(), -1.0), Error);
}

TEST_CASE("heat kernel is symmetric with unit row sums and matches a Taylor oracle") {
  Rng rng(12);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 2 + rng.below(9);
    const auto g = oracle::random_graph(n, rng.uniform(), rng);
    const double t = rng.uniform(0.05, 3.0);
    const Matrix h = heat_kernel(g, t);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 0; i < h.rows(); ++i) CHECK(std::abs(h.row(i).sum() - 1.0) < 1e-10);
    const Matrix ref = oracle::expm_taylor(-t * oracle::laplacian(g));
    CHECK((h - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("heat kernel approaches the identity as t goes to zero") {
  Rng rng(13);
  const auto g = oracle::random_graph(6, 0.5, rng);
  double prev = 1e300;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double gap = (heat_kernel(g, t) - Matrix::Identity(6, 6)).norm();
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("diffusion distance examples") {
  Rng rng(14);
  const auto g = oracle::random_graph(6, 0.5, rng);
  CHECK(diffusion_distance(g, g, 1.0) == 0.0);
  const double closed = std::pow(1 - std::exp(-2.0), 2);
  CHECK(diffusion_distance(LabelledGraph(2), single_edge(), 1.0) == doctest::Approx(closed).epsilon(1e-12));
  CHECK(closed == doctest::Approx(0.747646).epsilon(1e-6));
  for (int k = 0; k < 30; ++k) {
    const auto a = oracle::random_graph(5, 0.5, rng);
    const auto b = oracle::random_graph(5, 0.5, rng);
    CHECK(diffusion_distance(a, b, 0.7) == diffusion_distance(b, a, 0.7));
    CHECK(diffusion_distance(a, b, 0.7) == doctest::Approx(oracle::diffusion(a, b, 0.7)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(diffusion_distance(LabelledGraph(2), LabelledGraph(3), 1.0), Error);
}

TEST_CASE("metric properties over the N=4 space") {
  const auto space = enumerate_graph_space(4);
  DistanceEvaluator diff(MetricSpec::diffusion(1.0));
  for (std::size_t a = 0; a < space.size(); ++a)
    for (std::size_t b = 0; b < space.size(); ++b) {
      const double d = diff(space[a], space[b]);
      CHECK(d >= 0.0);
      CHECK((d == 0.0) == (a == b));
      CHECK(d == doctest::Approx(diffusion_distance(space[a], space[b], 1.0)).epsilon(1e-12));
      CHECK(hamming(space[a], space[b]) == hamming(space[b], space[a]));
    }
  // triangle inequality for Hamming
  for (std::size_t a = 0; a < space.size(); a += 3)
    for (std::size_t b = 0; b < space.size(); b += 5)
      for (std::size_t c = 0; c < space.size(); ++c)
        CHECK(hamming(space[a], space[c]) <= hamming(space[a], space[b]) + hamming(space[b], space[c]));
}

TEST_CASE("distance evaluator applies phi and survives cache turnover") {
  Rng rng(15);
  DistanceEvaluator ham(MetricSpec::hamming(Phi::Square));
  const auto a = oracle::random_graph(6, 0.5, rng);
  const auto b = oracle::random_graph(6, 0.5, rng);
  const double h = static_cast<double>(hamming(a, b));
  CHECK(ham(a, b) == h);
  CHECK(ham.phi(a, b) == h * h);

  DistanceEvaluator small(MetricSpec::diffusion(0.5), 4);
  for (int k = 0; k < 100; ++k) {
    const auto x = oracle::random_graph(6, 0.5, rng);
    const auto y = oracle::random_graph(6, 0.5, rng);
    CHECK(small(x, y) == doctest::Approx(diffusion_distance(x, y, 0.5)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(validate(MetricSpec::diffusion(0.0)), Error);
  CHECK(MetricSpec::diffusion(2.0, Phi::Square).describe() == "diffusion(t=2),square");
}

TEST_CASE("distance matrix examples") {
  Rng rng(16);
  const auto g = oracle::random_graph(5, 0.5, rng);
  CHECK(distance_matrix(GraphPopulation({g, g, g}), MetricSpec::hamming()).values().isZero());

  const auto h = oracle::random_graph(5, 0.5, rng);
  const auto two = distance_matrix(GraphPopulation({g, h}), MetricSpec::diffusion(1.0));
  CHECK(two.size() == 2);
  CHECK(two(0, 1) == doctest::Approx(diffusion_distance(g, h, 1.0)).epsilon(1e-12));
  CHECK(two(1, 0) == two(0, 1));

  GraphPopulation pop;
  for (int k = 0; k < 5; ++k) pop.add(sample_generator(ErdosRenyiSpec{0.3}, 8, rng));
  const auto d = distance_matrix(pop, MetricSpec::hamming());
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(d(i, i) == 0.0);
    for (std::size_t j = 0; j < 5; ++j) CHECK(d(i, j) == static_cast<double>(hamming(pop[i], pop[j])));
  }
  CHECK_THROWS_AS(distance_matrix(GraphPopulation{}, MetricSpec::hamming()), Error);
}

TEST_CASE("distance matrix does not depend on the thread count") {
  Rng rng(18);
  GraphPopulation pop;
  for (int k = 0; k < 12; ++k) pop.add(oracle::random_graph(7, 0.4, rng));
  const auto one = distance_matrix(pop, MetricSpec::diffusion(1.0), 1);
  const auto four = distance_matrix(pop, MetricSpec::diffusion(1.0), 4);
  CHECK((one.values() - four.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distance matrix validation") {
  Matrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(DistanceMatrix{bad}, Error);
  bad << 1, 1, 1, 0;
  CHECK_THROWS_AS(DistanceMatrix{bad}, Error);
}

TEST_CASE("classical MDS examples") {
  const DistanceMatrix zero(Matrix::Zero(4, 4));
  CHECK(classical_mds(zero, 2).isZero());

  Matrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const Matrix x = classical_mds(DistanceMatrix(d), 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(std::abs(x(i, 0) - x(j, 0)) - d(i, j)) < 1e-10);
  CHECK(std::abs(x.col(0).sum()) < 1e-10);

  CHECK_THROWS_AS(classical_mds(DistanceMatrix(d), 3), Error);
  CHECK_THROWS_AS(classical_mds(DistanceMatrix(d), 0), Error);
}

TEST_CASE("classical MDS round trip on embeddable configurations") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(8));
    const int dim = 1 + static_cast<int>(rng.below(3));
    Matrix pts(n, dim);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < dim; ++c) pts(i, c) = rng.uniform(-3.0, 3.0);
    Matrix d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
    const Matrix x = classical_mds(DistanceMatrix(d), static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(std::abs((x.row(i) - x.row(j)).norm() - d(i, j)) < 1e-8);
  }
}
