#include "netloc/graph.hpp"

#include <algorithm>
#include <string>

#include "netloc/error.hpp"
#include "netloc/rng.hpp"

namespace netloc {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ == 0) throw Error(ErrorKind::InvalidSize, "graph needs at least one node");
  for (auto& e : edges_) {
    if (e.u == e.v) {
      throw Error(ErrorKind::InvalidGraph, "self-loop on node " + std::to_string(e.u));
    }
    if (e.u >= node_count_ || e.v >= node_count_) {
      throw Error(ErrorKind::InvalidGraph, "edge (" + std::to_string(e.u) + "," +
                                               std::to_string(e.v) + ") outside [0," +
                                               std::to_string(node_count_) + ")");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw Error(ErrorKind::InvalidGraph, "duplicate edge (" + std::to_string(dup->u) + "," +
                                             std::to_string(dup->v) + ")");
  }

  offsets_.assign(node_count_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in this order leaves every
  // neighbor list ascending.
  for (const auto& e : edges_) adjacency_[cursor[e.v]++] = e.u;
  for (const auto& e : edges_) adjacency_[cursor[e.u]++] = e.v;
  for (std::size_t i = 0; i < node_count_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

bool Graph::has_edge(NodeId a, NodeId b) const noexcept {
  if (a >= node_count_ || b >= node_count_) return false;
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

Graph Graph::relabeled(std::span<const NodeId> permutation) const {
  if (permutation.size() != node_count_) {
    throw Error(ErrorKind::InvalidInput, "permutation length does not match node count");
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) edges.push_back({permutation[e.u], permutation[e.v]});
  return Graph(node_count_, std::move(edges));
}

std::string_view family_name(FamilyTag tag) noexcept {
  switch (tag) {
    case FamilyTag::Cycle: return "cycle";
    case FamilyTag::Path: return "path";
    case FamilyTag::Star: return "star";
    case FamilyTag::Wheel: return "wheel";
    case FamilyTag::ER: return "er";
    case FamilyTag::ScaleFree: return "scale_free";
  }
  return "unknown";
}

FamilyTag parse_family(std::string_view name) {
  for (auto tag : {FamilyTag::Cycle, FamilyTag::Path, FamilyTag::Star, FamilyTag::Wheel,
                   FamilyTag::ER, FamilyTag::ScaleFree}) {
    if (family_name(tag) == name) return tag;
  }
  throw Error(ErrorKind::InvalidParams, "unknown graph family '" + std::string(name) + "'");
}

double GraphFamily::er_probability(std::size_t n) const {
  if (edge_probability > 0.0) return edge_probability;
  return mean_degree / static_cast<double>(n);
}

void GraphFamily::validate(std::size_t n) const {
  switch (tag) {
    case FamilyTag::ER: {
      if (n < 2) throw Error(ErrorKind::InvalidSize, "ER graph needs n >= 2");
      const double p = er_probability(n);
      if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidProbability,
                    "ER edge probability " + std::to_string(p) + " outside (0, 1]");
      }
      break;
    }
    case FamilyTag::ScaleFree:
      if (attachments < 1 || attachments >= n) {
        throw Error(ErrorKind::InvalidParams, "scale-free graph needs 1 <= m < n");
      }
      break;
    default:
      break;
  }
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::InvalidSize, "cycle needs n >= 3");
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)});
  }
  return Graph(n, std::move(edges));
}

Graph make_path(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "path needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
  }
  return Graph(n, std::move(edges));
}

Graph make_star(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "star needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, static_cast<NodeId>(i)});
  return Graph(n, std::move(edges));
}

Graph make_wheel(std::size_t n) {
  if (n < 4) throw Error(ErrorKind::InvalidSize, "wheel needs n >= 4");
  std::vector<Edge> edges;
  edges.reserve(2 * (n - 1));
  const std::size_t rim = n - 1;
  for (std::size_t i = 1; i < n; ++i) {
    edges.push_back({0, static_cast<NodeId>(i)});
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(1 + i % rim)});
  }
  return Graph(n, std::move(edges));
}

Graph make_complete(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidSize, "complete graph needs n >= 1");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  return Graph(n, std::move(edges));
}

Graph make_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "ER graph needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidProbability,
                "ER edge probability " + std::to_string(p) + " outside (0, 1]");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // One draw per pair, even when p == 1, keeps the stream layout fixed.
      if (rng.uniform01() < p) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }
  return Graph(n, std::move(edges));
}

Graph make_scale_free(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw Error(ErrorKind::InvalidParams, "scale-free graph needs 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m + m * (n - m - 1));
  // Every edge endpoint appears once here, so a uniform pick is a
  // degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * (m + m * (n - m - 1)));
  for (std::size_t leaf = 1; leaf <= m; ++leaf) {
    edges.push_back({0, static_cast<NodeId>(leaf)});
    endpoints.push_back(0);
    endpoints.push_back(static_cast<NodeId>(leaf));
  }
  std::vector<NodeId> targets;
  targets.reserve(m);
  for (std::size_t v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[rng.uniform_index(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({t, static_cast<NodeId>(v)});
      endpoints.push_back(t);
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  return Graph(n, std::move(edges));
}

Graph generate(const GraphFamily& family, std::size_t n, std::uint64_t seed) {
  family.validate(n);
  switch (family.tag) {
    case FamilyTag::Cycle: return make_cycle(n);
    case FamilyTag::Path: return make_path(n);
    case FamilyTag::Star: return make_star(n);
    case FamilyTag::Wheel: return make_wheel(n);
    case FamilyTag::ER: return make_er(n, family.er_probability(n), seed);
    case FamilyTag::ScaleFree: return make_scale_free(n, family.attachments, seed);
  }
  throw Error(ErrorKind::InvalidParams, "unhandled graph family");
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace netloc
