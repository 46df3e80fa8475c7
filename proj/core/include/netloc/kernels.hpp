#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netloc/graph.hpp"
#include "netloc/matrix.hpp"
#include "netloc/rng.hpp"

namespace netloc::nn {

inline constexpr double kLeakySlope = 0.2;

/// a * b. Throws DimensionMismatch when a.cols() != b.rows().
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// transpose(a) * b.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * transpose(b).
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

/// D^-1/2 (A + I) D^-1/2 with D_ii the row sums of A + I.
DenseMatrix normalized_adjacency(const Graph& g);

/// Column-wise mean over rows (mean-pool readout).
std::vector<double> mean_rows(const DenseMatrix& h);

inline double relu(double x) noexcept { return x > 0.0 ? x : 0.0; }
/// Subgradient 0 at x == 0.
inline double relu_grad(double x) noexcept { return x > 0.0 ? 1.0 : 0.0; }
inline double leaky_relu(double x, double slope = kLeakySlope) noexcept {
  return x > 0.0 ? x : slope * x;
}
inline double leaky_relu_grad(double x, double slope = kLeakySlope) noexcept {
  return x > 0.0 ? 1.0 : slope;
}

DenseMatrix relu(const DenseMatrix& x);
/// Elementwise relu'(pre) * upstream.
DenseMatrix relu_backward(const DenseMatrix& pre, const DenseMatrix& upstream);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> scores);

/// Uniform on [-L, L], L = sqrt(6 / (f_in + f_out)).
DenseMatrix glorot_init(std::size_t f_in, std::size_t f_out, std::uint64_t seed);
DenseMatrix glorot_init(std::size_t f_in, std::size_t f_out, Rng& rng);

enum class LossType { MSE, LogMSE };

struct LossKind {
  LossType type = LossType::MSE;
  /// LogMSE compares ln(max(x, log_floor)) of prediction and target.
  double log_floor = 1e-12;
};

/// Mean loss over N = pred.size() items.
double loss(std::span<const double> pred, std::span<const double> target, const LossKind& kind);
/// dL/dpred, including the 1/N factor of the mean.
std::vector<double> loss_grad(std::span<const double> pred, std::span<const double> target,
                              const LossKind& kind);

/// Single entry of loss_grad() for a batch of `batch_size` items; lets callers
/// fuse forward and backward per graph without materializing the batch.
double loss_grad_term(double pred, double target, std::size_t batch_size, const LossKind& kind);
/// Single squared-error term of loss() before averaging.
double loss_term(double pred, double target, const LossKind& kind);

}  // namespace netloc::nn
