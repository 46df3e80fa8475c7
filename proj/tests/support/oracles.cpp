#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "netloc/rng.hpp"

namespace netloc::testing {

DenseMatrix adjacency_matrix(const Graph& g) {
  DenseMatrix a(g.node_count(), g.node_count());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

Eigen jacobi_eigen(const DenseMatrix& symmetric, double tol, int max_sweeps) {
  const std::size_t n = symmetric.rows();
  DenseMatrix a = symmetric;
  DenseMatrix v = DenseMatrix::identity(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    }
    if (std::sqrt(off) < tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  Eigen out;
  for (std::size_t k : order) {
    out.values.push_back(a(k, k));
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v(i, k);
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
    x[i] = s / a(i, i);
  }
  return x;
}

std::vector<double> pagerank_linear(const Graph& g, double damping) {
  const std::size_t n = g.node_count();
  DenseMatrix m = DenseMatrix::identity(n);
  for (const Edge& e : g.edges()) {
    m(e.u, e.v) -= damping / static_cast<double>(g.degree(e.v));
    m(e.v, e.u) -= damping / static_cast<double>(g.degree(e.u));
  }
  return dense_solve(m, std::vector<double>(n, (1.0 - damping) / static_cast<double>(n)));
}

namespace {

void enumerate_paths(const Graph& g, NodeId at, NodeId target, std::size_t remaining,
                     std::vector<NodeId>& path, std::vector<char>& on_path,
                     std::vector<std::vector<NodeId>>& found) {
  if (at == target) {
    if (remaining == 0) found.push_back(path);
    return;
  }
  if (remaining == 0) return;
  for (NodeId next : g.neighbors(at)) {
    if (on_path[next]) continue;
    on_path[next] = 1;
    path.push_back(next);
    enumerate_paths(g, next, target, remaining - 1, path, on_path, found);
    path.pop_back();
    on_path[next] = 0;
  }
}

}  // namespace

std::vector<double> brute_force_betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  if (n <= 2) return bc;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      std::vector<std::vector<NodeId>> shortest;
      for (std::size_t len = 1; len < n && shortest.empty(); ++len) {
        std::vector<NodeId> path{s};
        std::vector<char> on_path(n, 0);
        on_path[s] = 1;
        enumerate_paths(g, s, t, len, path, on_path, shortest);
      }
      if (shortest.empty()) continue;
      const double share = 1.0 / static_cast<double>(shortest.size());
      for (const auto& p : shortest) {
        for (std::size_t k = 1; k + 1 < p.size(); ++k) bc[p[k]] += share;
      }
    }
  }
  const double pairs = static_cast<double>((n - 1) * (n - 2)) / 2.0;
  for (double& v : bc) v /= pairs;
  return bc;
}

Graph random_connected(std::size_t n, double p, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Graph g = make_er(n, p, mix_seed(seed, attempt));
    if (is_connected(g)) return g;
  }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace netloc::testing
