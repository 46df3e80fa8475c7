#include "netloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netloc/error.hpp"

namespace netloc {

std::vector<double> clustering_coefficient(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> cc(n, 0.0);
  std::vector<char> mark(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto nb = g.neighbors(static_cast<NodeId>(v));
    const std::size_t d = nb.size();
    if (d < 2) continue;
    for (NodeId w : nb) mark[w] = 1;
    std::size_t links = 0;  // each triangle at v is seen twice
    for (NodeId w : nb) {
      for (NodeId x : g.neighbors(w)) links += mark[x];
    }
    for (NodeId w : nb) mark[w] = 0;
    cc[v] = static_cast<double>(links) / static_cast<double>(d * (d - 1));
  }
  return cc;
}

std::vector<double> pagerank(const Graph& g, const PageRankOptions& options) {
  const std::size_t n = g.node_count();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n);
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (g.degree(static_cast<NodeId>(v)) == 0) dangling += rank[v];
    }
    const double base = (1.0 - options.damping) * inv_n + options.damping * dangling * inv_n;
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (NodeId u : g.neighbors(static_cast<NodeId>(v))) {
        s += rank[u] / static_cast<double>(g.degree(u));
      }
      next[v] = base + options.damping * s;
      delta += std::abs(next[v] - rank[v]);
    }
    rank.swap(next);
    if (delta <= options.tol) {
      double total = 0.0;
      for (double r : rank) total += r;
      for (double& r : rank) r /= total;
      return rank;
    }
  }
  throw ConvergenceError("pagerank did not converge", 0.0, options.max_iter);
}

std::vector<double> degree_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 1) return {1.0};
  std::vector<double> dc(n);
  for (std::size_t v = 0; v < n; ++v) {
    dc[v] = static_cast<double>(g.degree(static_cast<NodeId>(v))) / static_cast<double>(n - 1);
  }
  return dc;
}

std::vector<double> betweenness_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  if (n <= 2) return bc;

  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> queue(n);
  std::vector<long long> dist(n);
  std::vector<double> sigma(n), delta(n);
  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    dist[s] = 0;
    sigma[s] = 1.0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = static_cast<NodeId>(s);
    while (head < tail) {
      const NodeId v = queue[head++];
      order.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Predecessors are recovered from distances instead of stored lists.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  const double pairs = static_cast<double>((n - 1) * (n - 2)) / 2.0;
  for (double& b : bc) b = b / 2.0 / pairs;
  return bc;
}

std::vector<double> closeness_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> cc(n, 0.0);
  if (n == 1) return cc;
  std::vector<long long> dist(n);
  std::vector<NodeId> queue(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = static_cast<NodeId>(s);
    long long total = 0;
    while (head < tail) {
      const NodeId v = queue[head++];
      total += dist[v];
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
      }
    }
    cc[s] = total > 0 ? static_cast<double>(n - 1) / static_cast<double>(total) : 0.0;
  }
  return cc;
}

std::vector<double> average_neighbor_degree(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> avg(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto nb = g.neighbors(static_cast<NodeId>(v));
    if (nb.empty()) continue;
    double s = 0.0;
    for (NodeId w : nb) s += static_cast<double>(g.degree(w));
    avg[v] = s / static_cast<double>(nb.size());
  }
  return avg;
}

FeatureMatrix raw_feature_matrix(const Graph& g) {
  const std::size_t n = g.node_count();
  const double dn = static_cast<double>(n);
  const std::array<std::vector<double>, kFeatureCount> columns = {
      clustering_coefficient(g),
      pagerank(g),
      degree_centrality(g),
      betweenness_centrality(g),
      closeness_centrality(g),
      [&] {
        std::vector<double> d(n);
        for (std::size_t v = 0; v < n; ++v) d[v] = static_cast<double>(g.degree(static_cast<NodeId>(v))) / dn;
        return d;
      }(),
      [&] {
        auto a = average_neighbor_degree(g);
        for (double& x : a) x /= dn;
        return a;
      }(),
  };
  FeatureMatrix m(n, kFeatureCount);
  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    for (std::size_t v = 0; v < n; ++v) m(v, c) = columns[c][v];
  }
  return m;
}

void min_max_scale_columns(FeatureMatrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double lo = m(0, c), hi = m(0, c);
    for (std::size_t r = 1; r < m.rows(); ++r) {
      lo = std::min(lo, m(r, c));
      hi = std::max(hi, m(r, c));
    }
    // Symmetric nodes can differ by rounding noise; treat that as constant.
    const double span = hi - lo;
    const bool constant = span <= 1e-12 * std::max(1.0, std::abs(hi));
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = constant ? 0.0 : (m(r, c) - lo) / span;
  }
}

FeatureMatrix build_feature_matrix(const Graph& g) {
  if (!is_connected(g)) {
    throw Error(ErrorKind::PreconditionViolation, "build_feature_matrix requires a connected graph");
  }
  FeatureMatrix m = raw_feature_matrix(g);
  if (!m.all_finite()) throw Error(ErrorKind::NumericFailure, "non-finite node feature");
  min_max_scale_columns(m);
  return m;
}

}  // namespace netloc
