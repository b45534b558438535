#include "netpop/graph.hpp"

#include <algorithm>
#include <sstream>

#include "netpop/error.hpp"

namespace netpop {

namespace {

std::string at(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NonBinaryEntry: return "NonBinaryEntry";
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::EigDecompositionFailure: return "EigDecompositionFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonFiniteLogRatio: return "NonFiniteLogRatio";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::IndivisiblePopulation: return "IndivisiblePopulation";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool Error::is_validation() const noexcept {
  switch (code_) {
    case ErrorCode::EigDecompositionFailure:
    case ErrorCode::InternalInconsistency:
    case ErrorCode::NonFiniteLogRatio:
    case ErrorCode::IoError:
      return false;
    default:
      return true;
  }
}

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t n_vertices, std::size_t pos) {
  std::size_t i = 0;
  std::size_t row = n_vertices - 1;
  while (pos >= row) {
    pos -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + pos};
}

LabelledGraph::LabelledGraph(std::size_t n_vertices)
    : n_(n_vertices), slots_(edge_slots(n_vertices)), words_((slots_ + 63) / 64, 0) {
  if (n_vertices == 0) throw Error(ErrorCode::InvalidSpec, "graph needs at least one vertex");
}

LabelledGraph LabelledGraph::from_code(std::size_t n_vertices, std::uint64_t code) {
  LabelledGraph g(n_vertices);
  if (g.slots_ > 64) throw Error(ErrorCode::SpaceTooLarge, "from_code needs at most 64 edge slots");
  if (g.slots_ < 64) code &= (Word{1} << g.slots_) - 1;
  if (!g.words_.empty()) g.words_[0] = code;
  return g;
}

bool LabelledGraph::has_edge(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return bit(pair_index(n_, i, j));
}

void LabelledGraph::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw Error(ErrorCode::NonZeroDiagonal, "self-loop at " + at(i, j));
  if (i >= n_ || j >= n_) throw Error(ErrorCode::SizeMismatch, "vertex out of range at " + at(i, j));
  if (i > j) std::swap(i, j);
  set_bit(pair_index(n_, i, j), present);
}

std::size_t LabelledGraph::edge_count() const noexcept {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::size_t> LabelledGraph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j, ++pos) {
      if (bit(pos)) {
        ++deg[i];
        ++deg[j];
      }
    }
  }
  return deg;
}

std::vector<std::pair<std::size_t, std::size_t>> LabelledGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j, ++pos)
      if (bit(pos)) out.emplace_back(i, j);
  return out;
}

std::size_t LabelledGraph::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ULL ^ n_;
  for (Word w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const LabelledGraph& a, const LabelledGraph& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  for (std::size_t k = a.words_.size(); k-- > 0;) {
    if (auto c = a.words_[k] <=> b.words_[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

LabelledGraph from_adjacency(const AdjacencyMatrix& matrix) {
  const std::size_t n = matrix.size();
  if (n == 0) throw Error(ErrorCode::NonSquare, "adjacency matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n)
      throw Error(ErrorCode::NonSquare, "adjacency row " + std::to_string(i + 1) + " has " +
                                            std::to_string(matrix[i].size()) + " entries, expected " +
                                            std::to_string(n));
  }
  LabelledGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int v = matrix[i][j];
      if (v != 0 && v != 1) throw Error(ErrorCode::NonBinaryEntry, "non-binary entry at " + at(i, j));
    }
    if (matrix[i][i] != 0) throw Error(ErrorCode::NonZeroDiagonal, "non-zero diagonal at " + at(i, i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix[i][j] != matrix[j][i]) throw Error(ErrorCode::NonSymmetric, "asymmetric entry at " + at(i, j));
      if (matrix[i][j]) g.set_bit(pair_index(n, i, j), true);
    }
  }
  return g;
}

AdjacencyMatrix to_adjacency(const LabelledGraph& g) {
  const std::size_t n = g.n_vertices();
  AdjacencyMatrix a(n, std::vector<int>(n, 0));
  for (auto [i, j] : g.edges()) a[i][j] = a[j][i] = 1;
  return a;
}

GraphPopulation::GraphPopulation(std::vector<LabelledGraph> graphs,
                                 std::vector<std::optional<std::string>> ids) {
  if (!ids.empty() && ids.size() != graphs.size())
    throw Error(ErrorCode::SchemaError, "id list length does not match graph count");
  ids.resize(graphs.size());
  for (std::size_t k = 0; k < graphs.size(); ++k) add(std::move(graphs[k]), std::move(ids[k]));
}

void GraphPopulation::add(LabelledGraph g, std::optional<std::string> id) {
  if (!graphs_.empty() && g.n_vertices() != graphs_.front().n_vertices()) {
    throw Error(ErrorCode::SchemaError, "population mixes graphs with " +
                                            std::to_string(graphs_.front().n_vertices()) + " and " +
                                            std::to_string(g.n_vertices()) + " vertices (field \"n\")");
  }
  graphs_.push_back(std::move(g));
  ids_.push_back(std::move(id));
}

std::size_t GraphPopulation::n_vertices() const noexcept {
  return graphs_.empty() ? 0 : graphs_.front().n_vertices();
}

GraphPopulation GraphPopulation::slice(std::size_t first, std::size_t count) const {
  GraphPopulation out;
  for (std::size_t k = first; k < first + count && k < graphs_.size(); ++k) out.add(graphs_[k], ids_[k]);
  return out;
}

std::vector<LabelledGraph> enumerate_graph_space(std::size_t n_vertices) {
  if (n_vertices == 0) throw Error(ErrorCode::InvalidSpec, "graph space needs N >= 1");
  if (n_vertices > kMaxEnumerableVertices)
    throw Error(ErrorCode::SpaceTooLarge, "graph space for N=" + std::to_string(n_vertices) +
                                              " is too large to enumerate (N <= 5)");
  const std::size_t slots = edge_slots(n_vertices);
  const std::uint64_t count = std::uint64_t{1} << slots;
  std::vector<LabelledGraph> space;
  space.reserve(count);
  for (std::uint64_t code = 0; code < count; ++code) space.push_back(LabelledGraph::from_code(n_vertices, code));
  return space;
}

std::vector<double> edge_frequencies(const GraphPopulation& pop) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "population is empty");
  const std::size_t slots = pop[0].n_slots();
  std::vector<std::size_t> counts(slots, 0);
  for (const auto& g : pop)
    for (std::size_t p = 0; p < slots; ++p) counts[p] += g.bit(p);
  std::vector<double> freq(slots);
  for (std::size_t p = 0; p < slots; ++p) freq[p] = static_cast<double>(counts[p]) / static_cast<double>(pop.size());
  return freq;
}

LabelledGraph majority_vote(const GraphPopulation& pop) {
  if (pop.empty()) throw Error(ErrorCode::EmptyPopulation, "majority vote of an empty population");
  const std::size_t slots = pop[0].n_slots();
  LabelledGraph out(pop.n_vertices());
  for (std::size_t p = 0; p < slots; ++p) {
    std::size_t c = 0;
    for (const auto& g : pop) c += g.bit(p);
    // strict majority; ties resolve to absent
    if (2 * c > pop.size()) out.set_bit(p, true);
  }
  return out;
}

LabelledGraph relabel(const LabelledGraph& g, std::span<const std::size_t> perm) {
  if (perm.size() != g.n_vertices()) throw Error(ErrorCode::SizeMismatch, "permutation length mismatch");
  LabelledGraph out(g.n_vertices());
  for (auto [i, j] : g.edges()) out.set_edge(perm[i], perm[j]);
  return out;
}

}  // namespace netpop
