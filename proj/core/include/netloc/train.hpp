#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netloc/gat.hpp"
#include "netloc/gcn.hpp"
#include "netloc/kernels.hpp"
#include "netloc/labeled_graph.hpp"
#include "netloc/optim.hpp"
#include "netloc/spectral.hpp"

namespace netloc {

enum class ModelKind { GCN, GAT };

std::string_view model_name(ModelKind kind) noexcept;
/// Accepts "gcn" and "gat"; throws InvalidParams otherwise.
ModelKind parse_model(std::string_view name);

struct TrainConfig {
  ModelKind model = ModelKind::GCN;
  GcnConfig gcn;
  /// Also carries the dropout rate used in GAT training.
  GatConfig gat;
  nn::LossKind loss;
  OptimizerConfig optimizer;
  std::size_t epochs = 500;
  /// 0 selects full batch for up to kFullBatchLimit graphs and batches of
  /// kDefaultBatch beyond that.
  std::size_t batch_size = 0;
  std::uint64_t seed = 1;
  RegionThresholds thresholds;
  /// Epochs after which weights are recorded; the final epoch is always added.
  std::vector<std::size_t> snapshot_epochs{0, 1, 2, 3, 4};
  std::size_t histogram_bins = 40;
  /// Start the output bias at the mean training target instead of 0.
  bool init_bias_to_mean = false;

  static constexpr std::size_t kFullBatchLimit = 1000;
  static constexpr std::size_t kDefaultBatch = 32;

  /// Throws InvalidParams for lr <= 0, dropout outside [0, 1), zero widths,
  /// zero histogram bins or invalid thresholds.
  void validate() const;
  std::size_t effective_batch(std::size_t dataset_size) const;
};

using Model = std::variant<GcnParams, GatParams>;

ModelKind model_kind(const Model& model) noexcept;
Model init_model(const TrainConfig& config);
double predict(const Model& model, const LabeledGraph& item);
std::vector<double> predict_all(const Model& model, std::span<const LabeledGraph> items);

/// Named flat tensors of a model, in optimizer order.
struct NamedTensor {
  std::string name;
  std::vector<double> values;
};

struct WeightSnapshot {
  std::size_t epoch = 0;
  std::vector<NamedTensor> tensors;
};

WeightSnapshot snapshot(const Model& model, std::size_t epoch);

struct TrainResult {
  Model model;
  /// Mean per-graph training loss of each epoch, accumulated over its batches.
  std::vector<double> loss_curve;
  std::vector<WeightSnapshot> snapshots;
};

/// Runs `config.epochs` epochs of forward, loss, backward and optimizer step.
/// Mini-batches are drawn from a seeded shuffle each epoch. epochs == 0
/// returns the initial parameters. Throws InvalidInput for an empty dataset
/// and NumericFailure (with epoch, batch and parameter diagnostics) when the
/// loss or gradients stop being finite.
TrainResult train(const TrainConfig& config, const std::vector<LabeledGraph>& dataset);

struct EvalRow {
  std::string id;
  std::size_t n = 0;
  std::string family;
  double target = 0.0;
  double prediction = 0.0;
  RegionLabel true_region = RegionLabel::Delocalized;
  RegionLabel predicted_region = RegionLabel::Delocalized;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  /// counts[t][p] for true region t+1 and predicted region p+1.
  std::array<std::array<std::size_t, 3>, 3> counts{};
  /// Row percentages of `counts`; rows with no graphs stay at 0.
  std::array<std::array<double, 3>, 3> percent{};
  double mse = 0.0;
  double accuracy = 0.0;
  /// Pearson correlation of predictions and targets; 0 when either is constant.
  double pearson = 0.0;
  /// Wall-clock seconds of the prediction pass. Not written by write_report.
  double runtime_seconds = 0.0;
};

/// Builds the report from predictions and targets.
EvalReport make_report(const std::vector<LabeledGraph>& dataset, std::span<const double> predictions,
                       const RegionThresholds& thresholds);

/// Predicts every graph and classifies targets and predictions. Throws
/// InvalidInput for an empty dataset.
EvalReport evaluate(const Model& model, const std::vector<LabeledGraph>& dataset,
                    const RegionThresholds& thresholds);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Writes predictions.csv, confusion.csv and summary.json into `dir`,
/// creating it when needed. Throws IoError on failure.
void write_report(const EvalReport& report, const std::string& dir);

/// One CSV per snapshot (weights_epoch_<e>.csv) with columns
/// tensor,bin,lo,hi,count. Each tensor is binned over its own value range.
void write_histograms(const std::vector<WeightSnapshot>& snapshots, std::size_t bins,
                      const std::string& dir);

void write_loss_curve(std::span<const double> loss_curve, const std::string& path);

}  // namespace netloc
