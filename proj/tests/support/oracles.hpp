#pragma once

#include <cstdint>
#include <vector>

#include "netloc/graph.hpp"
#include "netloc/matrix.hpp"

namespace netloc::testing {

DenseMatrix adjacency_matrix(const Graph& g);

struct Eigen {
  /// Descending eigenvalues.
  std::vector<double> values;
  /// vectors[k] is the unit eigenvector of values[k].
  std::vector<std::vector<double>> vectors;
};

/// Cyclic Jacobi rotations on a symmetric matrix until the off-diagonal
/// Frobenius norm falls below `tol`.
Eigen jacobi_eigen(const DenseMatrix& symmetric, double tol = 1e-14, int max_sweeps = 100);

/// Solves a x = b by Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b);

/// PageRank as the solution of (I - d P) x = (1 - d)/n for graphs without
/// isolated nodes, P_ij = A_ij / deg(j).
std::vector<double> pagerank_linear(const Graph& g, double damping);

/// Betweenness from explicit enumeration of every shortest path: for each
/// pair, simple paths are enumerated by increasing length until one exists.
std::vector<double> brute_force_betweenness(const Graph& g);

/// ER(n, p) graphs redrawn until connected.
Graph random_connected(std::size_t n, double p, std::uint64_t seed);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace netloc::testing
