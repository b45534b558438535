#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>

#include <Eigen/Dense>

#include "netpop/graph.hpp"

namespace netpop {

struct HammingMetric {};
struct DiffusionMetric {
  double t = 1.0;
};

enum class Phi { Identity, Square };

/// Choice of graph metric plus the transform applied to it inside SNF kernels.
struct MetricSpec {
  std::variant<HammingMetric, DiffusionMetric> kind = HammingMetric{};
  Phi phi = Phi::Identity;

  static MetricSpec hamming(Phi phi = Phi::Identity) { return {HammingMetric{}, phi}; }
  static MetricSpec diffusion(double t = 1.0, Phi phi = Phi::Identity) { return {DiffusionMetric{t}, phi}; }

  bool is_hamming() const { return std::holds_alternative<HammingMetric>(kind); }
  double diffusion_time() const;
  std::string describe() const;
};

/// Throws DomainError when t <= 0.
void validate(const MetricSpec& m);

inline double apply_phi(Phi phi, double d) { return phi == Phi::Square ? d * d : d; }

using Matrix = Eigen::MatrixXd;

std::size_t hamming(const LabelledGraph& g1, const LabelledGraph& g2);

/// Combinatorial Laplacian D - A.
Matrix laplacian(const LabelledGraph& g);

/// exp(-t L) through the symmetric eigendecomposition of L.
Matrix heat_kernel(const LabelledGraph& g, double t);

/// Squared Frobenius norm of the difference of the two heat kernels.
double diffusion_distance(const LabelledGraph& g1, const LabelledGraph& g2, double t);

/// Raw metric value d_G (phi is not applied).
double distance(const LabelledGraph& g1, const LabelledGraph& g2, const MetricSpec& m);

/// Caching distance evaluator. Heat kernels are memoised by graph; the cache
/// is bounded and cleared wholesale when full. Not thread-safe: each sampler
/// or worker owns its own instance.
class DistanceEvaluator {
public:
  explicit DistanceEvaluator(MetricSpec m, std::size_t cache_capacity = 1 << 14);

  const MetricSpec& spec() const noexcept { return spec_; }

  double operator()(const LabelledGraph& g1, const LabelledGraph& g2);
  double phi(const LabelledGraph& g1, const LabelledGraph& g2) { return apply_phi(spec_.phi, (*this)(g1, g2)); }

  const Matrix& kernel(const LabelledGraph& g);

private:
  std::size_t effective_capacity(std::size_t n_vertices) const;

  MetricSpec spec_;
  double t_ = 1.0;
  std::size_t capacity_;
  std::unordered_map<LabelledGraph, Matrix, GraphHash> cache_;
};

/// Symmetric matrix of pairwise raw distances with zero diagonal.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Matrix values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Matrix& values() const noexcept { return values_; }

private:
  Matrix values_;
};


/// All pairwise distances, one evaluation per unordered pair. Rows are
/// distributed over `threads` workers; each entry is computed independently
/// so the result does not depend on the thread count.
DistanceMatrix distance_matrix(const GraphPopulation& pop, const MetricSpec& m, unsigned threads = 1);

/// Torgerson scaling. Coordinates of eigen-directions with a non-positive
/// eigenvalue are zero.
Matrix classical_mds(const DistanceMatrix& d, std::size_t dim);

}  // namespace netpop
