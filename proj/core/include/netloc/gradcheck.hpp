#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netloc/kernels.hpp"
#include "netloc/labeled_graph.hpp"
#include "netloc/train.hpp"

namespace netloc {

struct GradcheckOptions {
  /// Central-difference step.
  double step = 1e-6;
  /// Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-5;
  std::size_t min_nodes = 5;
  std::size_t max_nodes = 10;
  /// Graphs per batch, so gradient accumulation is checked as well.
  std::size_t graphs = 3;
  /// Problems whose ReLU or LeakyReLU inputs come closer than this to zero are
  /// redrawn; finite differences straddling a kink are meaningless.
  double kink_margin = 1e-4;
  /// Under LogMSE, problems with a prediction at or below this are redrawn.
  double log_prediction_margin = 1e-2;
  std::size_t max_redraws = 200;
  nn::LossKind loss;
  GcnConfig gcn{kFeatureCount, 8, 8, 8};
  GatConfig gat{kFeatureCount, 2, 4, 8, 0.6, nn::kLeakySlope};
  /// GAT is checked in Train mode with fixed dropout masks when true.
  bool gat_train_mode = true;
};

struct GradcheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t parameters = 0;
  /// Redraws spent avoiding kinks.
  std::size_t redraws = 0;
};

/// Random batch of connected graphs with n in [min_nodes, max_nodes],
/// uniform random features on [0, 1) and targets on [0.05, 0.5).
std::vector<LabeledGraph> gradcheck_batch(std::uint64_t seed, const GradcheckOptions& options);

/// Compares every analytic parameter gradient of the batch loss with central
/// finite differences for a model initialized from `seed`.
GradcheckResult gradcheck(ModelKind kind, std::uint64_t seed, const GradcheckOptions& options = {});

}  // namespace netloc
