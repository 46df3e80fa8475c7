#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "netloc/graph.hpp"
#include "netloc/matrix.hpp"

namespace netloc {

/// n x 7 structural node features, each column min-max scaled per graph.
using FeatureMatrix = DenseMatrix;

inline constexpr std::size_t kFeatureCount = 7;

/// Column order of build_feature_matrix().
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "clustering", "pagerank",        "degree_centrality", "betweenness",
    "closeness",  "degree_over_n",   "avg_neighbor_degree_over_n",
};

/// 2 * triangles(v) / (deg(v) (deg(v) - 1)); 0 when deg(v) < 2.
std::vector<double> clustering_coefficient(const Graph& g);

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-10;  // L1 change between sweeps
  std::size_t max_iter = 10000;
};

/// Stationary vector of the damped random walk; sums to 1.
std::vector<double> pagerank(const Graph& g, const PageRankOptions& options = {});

/// deg(v) / (n - 1); 1 for the single-node graph.
std::vector<double> degree_centrality(const Graph& g);

/// Brandes accumulation over unordered pairs, divided by (n-1)(n-2)/2.
std::vector<double> betweenness_centrality(const Graph& g);

/// (n - 1) / sum_u dist(v, u); 0 for the single-node graph.
std::vector<double> closeness_centrality(const Graph& g);

/// Mean degree of v's neighbors; 0 for isolated nodes.
std::vector<double> average_neighbor_degree(const Graph& g);

/// Raw (unscaled) feature columns in kFeatureNames order.
FeatureMatrix raw_feature_matrix(const Graph& g);

/// Min-max scales every column to [0, 1]; constant columns become 0.
void min_max_scale_columns(FeatureMatrix& m);

/// raw_feature_matrix() followed by min_max_scale_columns(). Throws
/// PreconditionViolation for disconnected graphs.
FeatureMatrix build_feature_matrix(const Graph& g);

}  // namespace netloc
