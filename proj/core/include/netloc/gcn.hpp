#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "netloc/features.hpp"
#include "netloc/kernels.hpp"
#include "netloc/labeled_graph.hpp"
#include "netloc/matrix.hpp"

namespace netloc {

struct GcnConfig {
  std::size_t input_dim = kFeatureCount;
  std::size_t k0 = 64;
  std::size_t k1 = 64;
  std::size_t k2 = 64;
};

/// theta = {W0, W1, W2, Wlin, b}. The same layout holds gradients.
struct GcnTensors {
  DenseMatrix w0;    // input_dim x k0
  DenseMatrix w1;    // k0 x k1
  DenseMatrix w2;    // k1 x k2
  DenseMatrix wlin;  // k2 x 1
  double b = 0.0;

  static constexpr std::array<std::string_view, 5> kNames = {"W0", "W1", "W2", "Wlin", "b"};

  static GcnTensors zeros(const GcnConfig& config);
  GcnConfig config() const;

  /// Flat views in kNames order; b is a span of length one.
  std::vector<std::span<double>> views();
  std::vector<std::span<const double>> views() const;

  GcnTensors& operator+=(const GcnTensors& other);
  friend bool operator==(const GcnTensors&, const GcnTensors&) = default;
};

using GcnParams = GcnTensors;
using GcnGradients = GcnTensors;

/// Glorot-uniform weights (Wlin included), b = 0.
GcnParams init_gcn(const GcnConfig& config, std::uint64_t seed);

/// Cached intermediates of one forward pass over one graph.
struct GcnActivations {
  DenseMatrix ahat;
  std::array<DenseMatrix, 4> h;           // H(0) .. H(3)
  std::array<DenseMatrix, 3> propagated;  // Ahat H(l), l = 0..2
  std::array<DenseMatrix, 3> q;           // pre-activations Q(1) .. Q(3)
  std::vector<double> z;                  // mean-pooled H(3)
  double yhat = 0.0;
};

struct GcnOutput {
  double yhat = 0.0;
  GcnActivations acts;
};

/// One graph convolution before the nonlinearity: ahat * h * w.
DenseMatrix gcn_propagate(const DenseMatrix& ahat, const DenseMatrix& h, const DenseMatrix& w);

/// H(l) = relu(Ahat H(l-1) W(l-1)) for l = 1..3, z = row-mean of H(3),
/// yhat = z Wlin + b. Throws DimensionMismatch on nonconforming shapes.
GcnOutput gcn_forward(const GcnParams& params, const DenseMatrix& ahat, const FeatureMatrix& h0);

/// Gradients of this graph's loss contribution given dL/dyhat. Throws
/// StaleActivation when `acts` does not match the shapes of `params`.
GcnGradients gcn_backward(const GcnParams& params, const GcnActivations& acts, double dl_dyhat);

struct GcnBatchResult {
  double loss = 0.0;
  GcnGradients grads;
  std::vector<double> predictions;
};

/// Mean loss over the batch and gradients summed over its graphs.
/// Throws InvalidInput for an empty batch.
GcnBatchResult gcn_batch_step(const GcnParams& params, std::span<const LabeledGraph> batch,
                              const nn::LossKind& kind);

/// Prediction for one graph.
double gcn_predict(const GcnParams& params, const LabeledGraph& item);

}  // namespace netloc
