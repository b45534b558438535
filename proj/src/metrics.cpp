#include "netpop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netpop/error.hpp"
#include "netpop/parallel.hpp"

namespace netpop {

namespace {

void require_same_size(const LabelledGraph& a, const LabelledGraph& b) {
  if (a.n_vertices() != b.n_vertices())
    throw Error(ErrorCode::SizeMismatch, "graphs have " + std::to_string(a.n_vertices()) + " and " +
                                             std::to_string(b.n_vertices()) + " vertices");
}

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::DomainError, "diffusion time must be positive, got " + std::to_string(t));
}

}  // namespace

double MetricSpec::diffusion_time() const {
  if (auto* d = std::get_if<DiffusionMetric>(&kind)) return d->t;
  return 0.0;
}

std::string MetricSpec::describe() const {
  std::ostringstream os;
  if (is_hamming())
    os << "hamming";
  else
    os << "diffusion(t=" << diffusion_time() << ")";
  os << (phi == Phi::Square ? ",square" : ",identity");
  return os.str();
}

void validate(const MetricSpec& m) {
  if (!m.is_hamming()) require_positive_time(m.diffusion_time());
}

std::size_t hamming(const LabelledGraph& g1, const LabelledGraph& g2) {
  require_same_size(g1, g2);
  auto a = g1.words();
  auto b = g2.words();
  std::size_t d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += static_cast<std::size_t>(std::popcount(a[k] ^ b[k]));
  return d;
}

Matrix laplacian(const LabelledGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.n_vertices());
  Matrix l = Matrix::Zero(n, n);
  for (auto [i, j] : g.edges()) {
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    l(a, b) = l(b, a) = -1.0;
    l(a, a) += 1.0;
    l(b, b) += 1.0;
  }
  return l;
}

Matrix heat_kernel(const LabelledGraph& g, double t) {
  require_positive_time(t);
  const Matrix l = laplacian(g);
  if (g.edge_count() == 0) return Matrix::Identity(l.rows(), l.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(l);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::EigDecompositionFailure, "Laplacian eigendecomposition did not converge");
  const Eigen::VectorXd decay = (-t * eig.eigenvalues().array()).exp();
  const Matrix& q = eig.eigenvectors();
  Matrix k = q * decay.asDiagonal() * q.transpose();
  // symmetrise away rounding noise
  return 0.5 * (k + k.transpose());
}

double diffusion_distance(const LabelledGraph& g1, const LabelledGraph& g2, double t) {
  require_same_size(g1, g2);
  if (g1 == g2) return 0.0;
  return (heat_kernel(g1, t) - heat_kernel(g2, t)).squaredNorm();
}

double distance(const LabelledGraph& g1, const LabelledGraph& g2, const MetricSpec& m) {
  if (m.is_hamming()) return static_cast<double>(hamming(g1, g2));
  return diffusion_distance(g1, g2, m.diffusion_time());
}

DistanceEvaluator::DistanceEvaluator(MetricSpec m, std::size_t cache_capacity)
    : spec_(m), capacity_(cache_capacity) {
  validate(spec_);
  t_ = spec_.diffusion_time();
}

std::size_t DistanceEvaluator::effective_capacity(std::size_t n_vertices) const {
  // keep the cache within roughly 64 MiB whatever the graph size
  const std::size_t bytes = 8 * std::max<std::size_t>(n_vertices * n_vertices, 1);
  return std::max<std::size_t>(4, std::min(capacity_, (std::size_t{1} << 26) / bytes));
}

const Matrix& DistanceEvaluator::kernel(const LabelledGraph& g) {
  if (auto it = cache_.find(g); it != cache_.end()) return it->second;
  if (cache_.size() >= effective_capacity(g.n_vertices())) cache_.clear();
  return cache_.emplace(g, heat_kernel(g, t_)).first->second;
}

double DistanceEvaluator::operator()(const LabelledGraph& g1, const LabelledGraph& g2) {
  if (spec_.is_hamming()) return static_cast<double>(hamming(g1, g2));
  require_same_size(g1, g2);
  if (g1 == g2) return 0.0;
  // pointers into the map survive rehashing; iterators do not
  auto lookup = [&](const LabelledGraph& g) -> const Matrix* {
    auto it = cache_.find(g);
    return it == cache_.end() ? nullptr : &it->second;
  };
  const Matrix* a = lookup(g1);
  const Matrix* b = lookup(g2);
  if (!a || !b) {
    // make room for both kernels up front so neither is evicted mid-call
    if (cache_.size() + 2 > effective_capacity(g1.n_vertices())) {
      cache_.clear();
      a = b = nullptr;
    }
    if (!a) a = &cache_.emplace(g1, heat_kernel(g1, t_)).first->second;
    if (!b) b = &cache_.emplace(g2, heat_kernel(g2, t_)).first->second;
  }
  return (*a - *b).squaredNorm();
}

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw Error(ErrorCode::NonSquare, "distance matrix must be square");
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    if (values_(i, i) != 0.0) throw Error(ErrorCode::NonZeroDiagonal, "distance matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      if (!(values_(i, j) >= 0.0)) throw Error(ErrorCode::DomainError, "distances must be non-negative");
      if (std::abs(values_(i, j) - values_(j, i)) > 1e-12)
        throw Error(ErrorCode::NonSymmetric, "distance matrix must be symmetric");
    }
  }
}

DistanceMatrix distance_matrix(const GraphPopulation& pop, const MetricSpec& m, unsigned threads) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "distance matrix of an empty population");
  validate(m);
  const std::size_t n = pop.size();
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<Matrix> kernels;
  if (!m.is_hamming()) {
    kernels.resize(n);
    parallel_for(n, threads, [&](std::size_t k) { kernels[k] = heat_kernel(pop[k], m.diffusion_time()); });
  }
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v;
      if (m.is_hamming()) {
        v = static_cast<double>(hamming(pop[i], pop[j]));
      } else {
        v = pop[i] == pop[j] ? 0.0 : (kernels[i] - kernels[j]).squaredNorm();
      }
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      d(a, b) = d(b, a) = v;
    }
  });
  return DistanceMatrix(std::move(d));
}

Matrix classical_mds(const DistanceMatrix& dm, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dm.size());
  if (dim == 0 || static_cast<Eigen::Index>(dim) > std::max<Eigen::Index>(n - 1, 0))
    throw Error(ErrorCode::DomainError, "MDS dimension must be in [1, n-1]");
  const Matrix sq = dm.values().array().square().matrix();
  const Matrix j = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  Matrix b = -0.5 * j * sq * j;
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::EigDecompositionFailure, "MDS eigendecomposition did not converge");
  Matrix coords = Matrix::Zero(n, static_cast<Eigen::Index>(dim));
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  for (std::size_t c = 0; c < dim; ++c) {
    const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(c);  // eigenvalues ascend
    const double lambda = eig.eigenvalues()(col);
    if (lambda <= 1e-12 * scale) continue;
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;  // fixed sign
    coords.col(static_cast<Eigen::Index>(c)) = v * std::sqrt(lambda);
  }
  return coords;
}

}  // namespace netpop
