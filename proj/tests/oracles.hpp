#pragma once

// Test-side reference computations, written independently of the library
// code paths they check.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "netpop/graph.hpp"
#include "netpop/rng.hpp"

namespace oracle {

/// Hamming distance by comparing adjacency matrices entry by entry.
inline std::size_t hamming(const netpop::LabelledGraph& a, const netpop::LabelledGraph& b) {
  const auto A = netpop::to_adjacency(a);
  const auto B = netpop::to_adjacency(b);
  std::size_t d = 0;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j) d += A[i][j] != B[i][j];
  return d;
}

inline Eigen::MatrixXd laplacian(const netpop::LabelledGraph& g) {
  const auto A = netpop::to_adjacency(g);
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (A[i][j]) {
        L(i, j) = -1.0;
        L(i, i) += 1.0;
      }
  return L;
}

/// exp(M) by scaling and squaring with a truncated Taylor series.
inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& m) {
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const Eigen::MatrixXd a = m / std::pow(2.0, squarings);
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

inline double diffusion(const netpop::LabelledGraph& a, const netpop::LabelledGraph& b, double t) {
  const Eigen::MatrixXd ka = expm_taylor(-t * oracle::laplacian(a));
  const Eigen::MatrixXd kb = expm_taylor(-t * oracle::laplacian(b));
  return (ka - kb).squaredNorm();
}

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Random graph with independent Bernoulli(p) edges.
inline netpop::LabelledGraph random_graph(std::size_t n, double p, netpop::Rng& rng) {
  netpop::LabelledGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) g.set_edge(i, j);
  return g;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - q[k]);
  return 0.5 * s;
}

}  // namespace oracle
