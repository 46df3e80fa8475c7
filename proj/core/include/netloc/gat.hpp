#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netloc/features.hpp"
#include "netloc/graph.hpp"
#include "netloc/kernels.hpp"
#include "netloc/labeled_graph.hpp"
#include "netloc/matrix.hpp"

namespace netloc {

struct GatConfig {
  std::size_t input_dim = kFeatureCount;
  std::size_t heads = 4;        // layer-1 heads, concatenated
  std::size_t hidden = 16;      // per-head width in layer 1
  std::size_t output = 64;      // layer-2 width (single head)
  double dropout = 0.6;         // drop probability in train mode
  double leaky_slope = nn::kLeakySlope;
};

/// One attention head: W is F_in x F_out, a has length 2 F_out. The first
/// half of a scores the aggregating node, the second half the neighbor.
struct GatHead {
  DenseMatrix w;
  std::vector<double> a;

  friend bool operator==(const GatHead&, const GatHead&) = default;
};

struct GatTensors {
  std::vector<GatHead> layer1;
  GatHead layer2;
  DenseMatrix wlin;  // output x 1
  double b = 0.0;
  /// Hyperparameters that are not learned but shape the forward pass.
  double dropout = 0.6;
  double leaky_slope = nn::kLeakySlope;

  static GatTensors zeros(const GatConfig& config);
  GatConfig config() const;

  /// Flat views: per layer-1 head W then a, layer-2 W then a, Wlin, b.
  std::vector<std::span<double>> views();
  std::vector<std::span<const double>> views() const;
  std::vector<std::string> view_names() const;

  GatTensors& operator+=(const GatTensors& other);
  friend bool operator==(const GatTensors&, const GatTensors&) = default;
};

using GatParams = GatTensors;
using GatGradients = GatTensors;

GatParams init_gat(const GatConfig& config, std::uint64_t seed);

enum class Mode { Train, Eval };

/// LeakyReLU(a^T [wh_i || wh_j]).
double attention_score(std::span<const double> wh_i, std::span<const double> wh_j,
                       std::span<const double> a, double slope = nn::kLeakySlope);

/// Softmax over one neighborhood's scores.
std::vector<double> attention_normalize(std::span<const double> scores);

/// N(i) plus i itself, in CSR form with ascending node ids.
struct AttentionNeighborhood {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> nodes;

  static AttentionNeighborhood from_graph(const Graph& g);
  std::size_t node_count() const { return offsets.size() - 1; }
};

struct GatHeadCache {
  DenseMatrix z;                  // X W
  std::vector<double> pre;        // a^T [z_i || z_j] per neighborhood entry
  std::vector<double> alpha;      // softmax weights per entry
  std::vector<double> keep;       // dropout factor per entry (0 or 1/(1-p)); empty in eval
};

struct GatLayerCache {
  DenseMatrix input;              // layer input after dropout
  std::vector<double> input_keep; // dropout factor per input entry; empty in eval
  std::vector<GatHeadCache> heads;
  DenseMatrix pre_activation;     // concatenated head aggregates
  DenseMatrix output;             // relu(pre_activation)
};

struct GatActivations {
  AttentionNeighborhood neighborhood;
  std::array<GatLayerCache, 2> layers;
  std::vector<double> z;
  double yhat = 0.0;
};

struct GatOutput {
  double yhat = 0.0;
  GatActivations acts;
};

/// Evaluation-mode attention layer: heads are concatenated, then ReLU.
DenseMatrix gat_layer(std::span<const GatHead> heads, const Graph& g, const DenseMatrix& h_in,
                      double slope = nn::kLeakySlope);

/// Two attention layers, mean-pool readout, linear head. In Train mode
/// dropout (rate params.dropout) masks each layer's input and the attention
/// weights, drawn from a generator seeded with `seed`. Eval mode ignores
/// `seed` and is deterministic.
GatOutput gat_forward(const GatParams& params, const Graph& g, const FeatureMatrix& h0, Mode mode,
                      std::uint64_t seed = 0);

/// Throws StaleActivation when `acts` does not match `params`.
GatGradients gat_backward(const GatParams& params, const GatActivations& acts, double dl_dyhat);

struct GatBatchResult {
  double loss = 0.0;
  GatGradients grads;
  std::vector<double> predictions;
};

/// Graph i of the batch uses dropout seed mix_seed(seed, i).
GatBatchResult gat_batch_step(const GatParams& params, std::span<const LabeledGraph> batch,
                              const nn::LossKind& kind, Mode mode, std::uint64_t seed);

double gat_predict(const GatParams& params, const LabeledGraph& item);

}  // namespace netloc
