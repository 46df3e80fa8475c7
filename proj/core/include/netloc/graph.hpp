#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netloc {

using NodeId = std::uint32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on nodes [0, n).
///
/// Edges are canonicalized (u < v) and sorted. Adjacency is held in CSR
/// form with each neighbor list sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Throws InvalidSize for n == 0, InvalidGraph for self-loops, duplicate
  /// edges (in either orientation) or endpoints outside [0, n).
  Graph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId a, NodeId b) const noexcept;

  /// Relabels node v as permutation[v].
  Graph relabeled(std::span<const NodeId> permutation) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
};

enum class FamilyTag { Cycle, Path, Star, Wheel, ER, ScaleFree };

std::string_view family_name(FamilyTag tag) noexcept;
/// Accepts the names produced by family_name(); throws InvalidParams otherwise.
FamilyTag parse_family(std::string_view name);

/// A generator family plus its parameters. ER uses either `edge_probability`
/// (when > 0) or `mean_degree` (p = <k>/n). ScaleFree uses `attachments` (m);
/// its seed is the star on m + 1 nodes.
struct GraphFamily {
  FamilyTag tag = FamilyTag::Cycle;
  double edge_probability = 0.0;
  double mean_degree = 8.0;
  std::size_t attachments = 2;

  /// Throws InvalidParams / InvalidProbability when the parameters cannot
  /// produce a graph of size n.
  void validate(std::size_t n) const;
  double er_probability(std::size_t n) const;
};

// Deterministic families. Node 0 is the hub for star and wheel.
Graph make_cycle(std::size_t n);
Graph make_path(std::size_t n);
Graph make_star(std::size_t n);
Graph make_wheel(std::size_t n);
Graph make_complete(std::size_t n);

/// G(n, p): each of the n(n-1)/2 pairs kept independently with probability p.
/// May return a disconnected graph.
Graph make_er(std::size_t n, double p, std::uint64_t seed);

/// Barabasi-Albert growth from a star on m + 1 nodes; every new node attaches
/// to m distinct existing nodes chosen with probability proportional to degree.
Graph make_scale_free(std::size_t n, std::size_t m, std::uint64_t seed);

/// Dispatches on family.tag; `seed` is ignored by deterministic families.
Graph generate(const GraphFamily& family, std::size_t n, std::uint64_t seed);

bool is_connected(const Graph& g);

// Edge-list text format: first line "n m", then m lines "i j" (0-indexed,
// i < j), LF line endings.
void write_edge_list(std::ostream& out, const Graph& g);
std::string to_edge_list(const Graph& g);
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list_file(const std::string& path, const Graph& g);

}  // namespace netloc
