#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netpop {

/// Number of vertex pairs of an N-vertex simple graph.
constexpr std::size_t edge_slots(std::size_t n_vertices) {
  return n_vertices * (n_vertices - (n_vertices > 0 ? 1 : 0)) / 2;
}

/// Row-major upper-triangular index of the pair (i, j), 0-based, i < j.
constexpr std::size_t pair_index(std::size_t n_vertices, std::size_t i, std::size_t j) {
  return i * n_vertices - i * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of pair_index.
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t n_vertices, std::size_t pos);

/// Simple undirected graph on vertices {0, ..., N-1}. Edge indicators are
/// packed into 64-bit words keyed by pair_index; only the upper triangle is
/// stored so symmetry and the absence of self-loops hold by construction.
class LabelledGraph {
public:
  using Word = std::uint64_t;

  LabelledGraph() = default;
  explicit LabelledGraph(std::size_t n_vertices);

  /// Graph whose low `edge_slots(n)` bits of `code` give the edge set.
  /// Requires edge_slots(n) <= 64.
  static LabelledGraph from_code(std::size_t n_vertices, std::uint64_t code);

  std::size_t n_vertices() const noexcept { return n_; }
  std::size_t n_slots() const noexcept { return slots_; }

  bool has_edge(std::size_t i, std::size_t j) const;
  void set_edge(std::size_t i, std::size_t j, bool present = true);

  bool bit(std::size_t pos) const noexcept { return (words_[pos >> 6] >> (pos & 63)) & 1U; }
  void set_bit(std::size_t pos, bool value) noexcept {
    const Word mask = Word{1} << (pos & 63);
    if (value)
      words_[pos >> 6] |= mask;
    else
      words_[pos >> 6] &= ~mask;
  }
  void flip_bit(std::size_t pos) noexcept { words_[pos >> 6] ^= Word{1} << (pos & 63); }

  std::size_t edge_count() const noexcept;
  std::vector<std::size_t> degrees() const;
  /// Edge list as 0-based (i, j) pairs with i < j, in pair_index order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  std::size_t hash() const noexcept;

  friend bool operator==(const LabelledGraph&, const LabelledGraph&) = default;
  /// Orders by vertex count, then by the edge bit-set read as a binary
  /// number with the highest slot most significant.
  friend std::strong_ordering operator<=>(const LabelledGraph& a, const LabelledGraph& b);

private:
  std::size_t n_ = 0;
  std::size_t slots_ = 0;
  std::vector<Word> words_;
};

struct GraphHash {
  std::size_t operator()(const LabelledGraph& g) const noexcept { return g.hash(); }
};

using AdjacencyMatrix = std::vector<std::vector<int>>;

LabelledGraph from_adjacency(const AdjacencyMatrix& matrix);
AdjacencyMatrix to_adjacency(const LabelledGraph& g);

/// Ordered, possibly repeating, collection of graphs on a common vertex set.
class GraphPopulation {
public:
  GraphPopulation() = default;
  explicit GraphPopulation(std::vector<LabelledGraph> graphs,
                           std::vector<std::optional<std::string>> ids = {});

  void add(LabelledGraph g, std::optional<std::string> id = std::nullopt);

  std::size_t size() const noexcept { return graphs_.size(); }
  bool empty() const noexcept { return graphs_.empty(); }
  /// Common vertex count; 0 for an empty population.
  std::size_t n_vertices() const noexcept;

  const LabelledGraph& operator[](std::size_t k) const { return graphs_[k]; }
  const std::optional<std::string>& id(std::size_t k) const { return ids_[k]; }
  const std::vector<LabelledGraph>& graphs() const noexcept { return graphs_; }

  auto begin() const { return graphs_.begin(); }
  auto end() const { return graphs_.end(); }

  /// Members [first, first + count).
  GraphPopulation slice(std::size_t first, std::size_t count) const;

private:
  std::vector<LabelledGraph> graphs_;
  std::vector<std::optional<std::string>> ids_;
};

inline constexpr std::size_t kMaxEnumerableVertices = 5;

/// All 2^{N(N-1)/2} graphs on N vertices in increasing bit-set order.
std::vector<LabelledGraph> enumerate_graph_space(std::size_t n_vertices);

/// Edge present iff strictly more than half the members contain it.
LabelledGraph majority_vote(const GraphPopulation& pop);

/// Per-slot fraction of members containing the edge.
std::vector<double> edge_frequencies(const GraphPopulation& pop);

/// Applies a vertex relabelling: vertex v of `g` becomes perm[v].
LabelledGraph relabel(const LabelledGraph& g, std::span<const std::size_t> perm);

}  // namespace netpop
