#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "netloc/graph.hpp"

namespace netloc {

struct SpectralResult {
  double lambda1 = 0.0;
  /// Unit-norm principal eigenvector with positive entry sum.
  std::vector<double> pev;
  std::size_t iterations = 0;
  /// ||A u - lambda1 u||_2 at return.
  double residual = 0.0;
};

struct PowerIterationOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

/// Principal eigenpair of the adjacency matrix of a connected graph.
///
/// Iterates u <- (A + I) u / ||(A + I) u|| from the all-ones vector. The unit
/// shift keeps the dominant eigenvalue isolated on bipartite graphs, where A
/// has both +lambda1 and -lambda1. Stops when ||A u - (u.Au) u|| <= tol.
///
/// Throws PreconditionViolation for disconnected graphs, InvalidParams for
/// tol <= 0, and ConvergenceError when max_iter is exhausted.
SpectralResult power_iteration(const Graph& g, const PowerIterationOptions& options = {});

/// Inverse participation ratio sum(v^4) / (sum(v^2))^2. Throws InvalidInput for
/// an empty or all-zero vector.
double ipr(std::span<const double> v);

enum class RegionLabel : int { Delocalized = 1, WeaklyLocalized = 2, StronglyLocalized = 3 };

std::string_view region_name(RegionLabel label) noexcept;

struct RegionThresholds {
  double tau1 = 0.05;
  double tau2 = 0.2;
  double epsilon = 1e-6;

  /// Throws InvalidParams unless 0 < tau1 < tau2 < 1 and epsilon > 0.
  void validate() const;
};

/// r1 if y <= tau1 - eps; r3 if y >= tau2 + eps; r2 otherwise.
RegionLabel classify_region(double y, const RegionThresholds& thresholds);

struct DynamicsParams {
  double alpha = 0.0;
  double beta = 1.0;
  std::vector<double> x0;
  double t_max = 100.0;
  double dt = 0.01;
};

/// RK4 integration of dx/dt = (alpha I + beta A) x from x0 to t_max,
/// renormalizing to unit length after every step. Returns x(t_max) / ||x||.
///
/// Throws PreconditionViolation for disconnected graphs, InvalidParams for
/// beta == 0, dt <= 0, or an x0 of the wrong length or all zeros, and
/// NumericFailure if the state stops being finite.
std::vector<double> integrate_dynamics(const Graph& g, const DynamicsParams& params);

/// IPR of the principal eigenvector: the regression target for g.
double label_graph(const Graph& g, const PowerIterationOptions& options = {});

/// y = A x using the CSR adjacency.
void adjacency_multiply(const Graph& g, std::span<const double> x, std::span<double> y);

}  // namespace netloc
