#include "netloc/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <type_traits>
#include <utility>

#include "netloc/error.hpp"
#include "netloc/parallel.hpp"
#include "netloc/rng.hpp"

namespace netloc {

std::string_view model_name(ModelKind kind) noexcept {
  return kind == ModelKind::GCN ? "gcn" : "gat";
}

ModelKind parse_model(std::string_view name) {
  if (name == "gcn") return ModelKind::GCN;
  if (name == "gat") return ModelKind::GAT;
  throw Error(ErrorKind::InvalidParams, "unknown model '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(optimizer.lr > 0.0)) throw Error(ErrorKind::InvalidParams, "learning rate must be > 0");
  if (optimizer.weight_decay < 0.0) {
    throw Error(ErrorKind::InvalidParams, "weight decay must be >= 0");
  }
  if (!(gat.dropout >= 0.0 && gat.dropout < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "dropout must lie in [0, 1)");
  }
  if (gcn.input_dim == 0 || gcn.k0 == 0 || gcn.k1 == 0 || gcn.k2 == 0 || gat.input_dim == 0 ||
      gat.heads == 0 || gat.hidden == 0 || gat.output == 0) {
    throw Error(ErrorKind::InvalidParams, "layer widths must be >= 1");
  }
  if (histogram_bins == 0) throw Error(ErrorKind::InvalidParams, "histogram bins must be >= 1");
  if (loss.type == nn::LossType::LogMSE && !(loss.log_floor > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "log loss floor must be > 0");
  }
  thresholds.validate();
}

std::size_t TrainConfig::effective_batch(std::size_t dataset_size) const {
  if (batch_size != 0) return std::min(batch_size, dataset_size);
  return dataset_size <= kFullBatchLimit ? dataset_size : kDefaultBatch;
}

ModelKind model_kind(const Model& model) noexcept {
  return std::holds_alternative<GcnParams>(model) ? ModelKind::GCN : ModelKind::GAT;
}

Model init_model(const TrainConfig& config) {
  if (config.model == ModelKind::GCN) return init_gcn(config.gcn, config.seed);
  return init_gat(config.gat, config.seed);
}

double predict(const Model& model, const LabeledGraph& item) {
  return std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GcnParams>) {
          return gcn_predict(p, item);
        } else {
          return gat_predict(p, item);
        }
      },
      model);
}

std::vector<double> predict_all(const Model& model, std::span<const LabeledGraph> items) {
  std::vector<double> out(items.size());
  parallel_for(items.size(), [&](std::size_t i) { out[i] = predict(model, items[i]); });
  return out;
}

namespace {

std::vector<std::string> tensor_names(const Model& model) {
  if (const auto* gcn = std::get_if<GcnParams>(&model)) {
    (void)gcn;
    return {GcnTensors::kNames.begin(), GcnTensors::kNames.end()};
  }
  return std::get<GatParams>(model).view_names();
}

std::vector<std::span<double>> model_views(Model& model) {
  return std::visit([](auto& p) { return p.views(); }, model);
}

std::vector<std::span<const double>> model_views(const Model& model) {
  return std::visit([](const auto& p) { return p.views(); }, model);
}

double& model_bias(Model& model) {
  return std::visit([](auto& p) -> double& { return p.b; }, model);
}

std::string diagnostics(const Model& model, std::size_t epoch, std::size_t batch, double loss) {
  std::ostringstream out;
  out << "non-finite training state at epoch " << epoch << ", batch " << batch
      << " (loss " << loss << "); parameter norms:";
  const auto names = tensor_names(model);
  const auto views = model_views(model);
  for (std::size_t t = 0; t < views.size(); ++t) {
    double sq = 0.0;
    for (double v : views[t]) sq += v * v;
    out << ' ' << names[t] << '=' << std::sqrt(sq);
  }
  return out.str();
}

struct StepResult {
  double loss;
  Model grads;
};

StepResult batch_step(const Model& model, std::span<const LabeledGraph> batch,
                      const nn::LossKind& loss, std::uint64_t dropout_seed) {
  if (const auto* gcn = std::get_if<GcnParams>(&model)) {
    auto r = gcn_batch_step(*gcn, batch, loss);
    return {r.loss, std::move(r.grads)};
  }
  auto r = gat_batch_step(std::get<GatParams>(model), batch, loss, Mode::Train, dropout_seed);
  return {r.loss, std::move(r.grads)};
}

bool all_finite(std::span<const std::span<const double>> views) {
  for (const auto& v : views) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

}  // namespace

WeightSnapshot snapshot(const Model& model, std::size_t epoch) {
  WeightSnapshot snap;
  snap.epoch = epoch;
  const auto names = tensor_names(model);
  const auto views = model_views(model);
  for (std::size_t t = 0; t < views.size(); ++t) {
    snap.tensors.push_back({names[t], {views[t].begin(), views[t].end()}});
  }
  return snap;
}

TrainResult train(const TrainConfig& config, const std::vector<LabeledGraph>& dataset) {
  config.validate();
  if (dataset.empty()) throw Error(ErrorKind::InvalidInput, "training set is empty");

  TrainResult result{init_model(config), {}, {}};
  if (config.init_bias_to_mean) {
    double sum = 0.0;
    for (const auto& item : dataset) sum += item.target;
    model_bias(result.model) = sum / static_cast<double>(dataset.size());
  }

  auto wants_snapshot = [&](std::size_t epoch) {
    if (epoch == config.epochs) return true;
    return std::find(config.snapshot_epochs.begin(), config.snapshot_epochs.end(), epoch) !=
           config.snapshot_epochs.end();
  };
  if (wants_snapshot(0)) result.snapshots.push_back(snapshot(result.model, 0));

  const std::size_t batch = config.effective_batch(dataset.size());
  const bool shuffled = batch < dataset.size();
  std::vector<LabeledGraph> order = dataset;
  Rng shuffle_rng(mix_seed(config.seed, 0x5348));
  Optimizer optimizer(config.optimizer);
  result.loss_curve.reserve(config.epochs);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (shuffled) shuffle_rng.shuffle(std::span<LabeledGraph>(order));
    double weighted = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += batch, ++batch_index) {
      const std::size_t len = std::min(batch, order.size() - start);
      const std::span<const LabeledGraph> items(order.data() + start, len);
      const std::uint64_t dropout_seed = mix_seed(config.seed, (epoch << 24) + batch_index);
      StepResult step = batch_step(result.model, items, config.loss, dropout_seed);
      const auto grad_views = model_views(std::as_const(step.grads));
      if (!std::isfinite(step.loss) || !all_finite(grad_views)) {
        throw Error(ErrorKind::NumericFailure,
                    diagnostics(result.model, epoch, batch_index, step.loss));
      }
      optimizer.step(model_views(result.model), grad_views);
      weighted += step.loss * static_cast<double>(len);
    }
    result.loss_curve.push_back(weighted / static_cast<double>(order.size()));
    if (!all_finite(model_views(std::as_const(result.model)))) {
      throw Error(ErrorKind::NumericFailure, diagnostics(result.model, epoch, batch_index, 0.0));
    }
    if (wants_snapshot(epoch)) result.snapshots.push_back(snapshot(result.model, epoch));
  }
  return result;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "pearson length mismatch");
  if (x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

EvalReport make_report(const std::vector<LabeledGraph>& dataset, std::span<const double> predictions,
                       const RegionThresholds& thresholds) {
  if (dataset.empty()) throw Error(ErrorKind::InvalidInput, "evaluation set is empty");
  if (predictions.size() != dataset.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one prediction per graph is required");
  }
  thresholds.validate();
  EvalReport report;
  std::vector<double> targets;
  double sq = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& item = dataset[i];
    EvalRow row{item.id,
                item.graph.node_count(),
                item.family,
                item.target,
                predictions[i],
                classify_region(item.target, thresholds),
                classify_region(predictions[i], thresholds)};
    const auto t = static_cast<std::size_t>(row.true_region) - 1;
    const auto p = static_cast<std::size_t>(row.predicted_region) - 1;
    ++report.counts[t][p];
    if (t == p) ++correct;
    sq += (row.prediction - row.target) * (row.prediction - row.target);
    targets.push_back(item.target);
    report.rows.push_back(std::move(row));
  }
  for (std::size_t t = 0; t < 3; ++t) {
    const std::size_t total = report.counts[t][0] + report.counts[t][1] + report.counts[t][2];
    if (total == 0) continue;
    for (std::size_t p = 0; p < 3; ++p) {
      report.percent[t][p] =
          100.0 * static_cast<double>(report.counts[t][p]) / static_cast<double>(total);
    }
  }
  const double n = static_cast<double>(dataset.size());
  report.mse = sq / n;
  report.accuracy = static_cast<double>(correct) / n;
  report.pearson = pearson_correlation(predictions, targets);
  return report;
}

EvalReport evaluate(const Model& model, const std::vector<LabeledGraph>& dataset,
                    const RegionThresholds& thresholds) {
  if (dataset.empty()) throw Error(ErrorKind::InvalidInput, "evaluation set is empty");
  const auto start = std::chrono::steady_clock::now();
  const auto predictions = predict_all(model, dataset);
  const auto stop = std::chrono::steady_clock::now();
  EvalReport report = make_report(dataset, predictions, thresholds);
  report.runtime_seconds = std::chrono::duration<double>(stop - start).count();
  return report;
}

}  // namespace netloc
