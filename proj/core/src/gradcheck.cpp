#include "netloc/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "netloc/error.hpp"
#include "netloc/rng.hpp"

namespace netloc {

std::vector<LabeledGraph> gradcheck_batch(std::uint64_t seed, const GradcheckOptions& options) {
  if (options.min_nodes < 2 || options.min_nodes > options.max_nodes || options.graphs == 0) {
    throw Error(ErrorKind::InvalidParams, "gradcheck: bad batch shape");
  }
  Rng rng(seed);
  std::vector<LabeledGraph> batch;
  for (std::size_t i = 0; i < options.graphs; ++i) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(options.min_nodes, options.max_nodes));
    Graph g;
    do {
      g = make_er(n, 0.5, rng.next_u64());
    } while (!is_connected(g));
    LabeledGraph item;
    item.id = "gradcheck-" + std::to_string(i);
    item.features = FeatureMatrix(n, kFeatureCount);
    for (double& v : item.features.values()) v = rng.uniform01();
    item.target = rng.uniform(0.05, 0.5);
    item.graph = std::move(g);
    item.family = "er";
    item.seed = seed;
    batch.push_back(std::move(item));
  }
  return batch;
}

namespace {

double min_abs_nonzero(std::span<const double> values, double current) {
  for (double v : values) {
    if (v != 0.0) current = std::min(current, std::abs(v));
  }
  return current;
}

struct Margins {
  // Smallest nonzero |input| of any ReLU or LeakyReLU over the batch. Entries
  // that are exactly zero come from dropped inputs and stay zero under
  // parameter perturbation.
  double kink = INFINITY;
  double min_prediction = INFINITY;
};

Margins margins(const Model& model, const std::vector<LabeledGraph>& batch, Mode mode,
                std::uint64_t dropout_seed) {
  Margins m;
  double& closest = m.kink;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& item = batch[i];
    if (const auto* gcn = std::get_if<GcnParams>(&model)) {
      const auto out = gcn_forward(*gcn, nn::normalized_adjacency(item.graph), item.features);
      for (const auto& q : out.acts.q) closest = min_abs_nonzero(q.values(), closest);
      m.min_prediction = std::min(m.min_prediction, out.yhat);
    } else {
      const auto out = gat_forward(std::get<GatParams>(model), item.graph, item.features, mode,
                                   mix_seed(dropout_seed, i));
      for (const auto& layer : out.acts.layers) {
        closest = min_abs_nonzero(layer.pre_activation.values(), closest);
        for (const auto& head : layer.heads) closest = min_abs_nonzero(head.pre, closest);
      }
      m.min_prediction = std::min(m.min_prediction, out.yhat);
    }
  }
  return m;
}

struct LossAndGrads {
  double loss;
  Model grads;
};

LossAndGrads evaluate(const Model& model, const std::vector<LabeledGraph>& batch,
                      const nn::LossKind& loss, Mode mode, std::uint64_t dropout_seed) {
  if (const auto* gcn = std::get_if<GcnParams>(&model)) {
    auto r = gcn_batch_step(*gcn, batch, loss);
    return {r.loss, std::move(r.grads)};
  }
  auto r = gat_batch_step(std::get<GatParams>(model), batch, loss, mode, dropout_seed);
  return {r.loss, std::move(r.grads)};
}

}  // namespace

GradcheckResult gradcheck(ModelKind kind, std::uint64_t seed, const GradcheckOptions& options) {
  if (!(options.step > 0.0) || !(options.floor > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "gradcheck: step and floor must be > 0");
  }
  TrainConfig config;
  config.model = kind;
  config.gcn = options.gcn;
  config.gat = options.gat;
  const Mode mode = kind == ModelKind::GAT && options.gat_train_mode ? Mode::Train : Mode::Eval;

  GradcheckResult result;
  Model model;
  std::vector<LabeledGraph> batch;
  std::uint64_t dropout_seed = 0;
  for (;; ++result.redraws) {
    if (result.redraws > options.max_redraws) {
      throw Error(ErrorKind::ConvergenceFailure, "gradcheck: every redraw landed near a kink or the log floor");
    }
    const std::uint64_t attempt = mix_seed(seed, result.redraws);
    config.seed = mix_seed(attempt, 1);
    model = init_model(config);
    batch = gradcheck_batch(mix_seed(attempt, 2), options);
    dropout_seed = mix_seed(attempt, 3);
    std::visit([](auto& p) { p.b = 0.1; }, model);
    const auto m = margins(model, batch, mode, dropout_seed);
    // The LogMSE clamp is a kink too, and a clamped item adds a loss so large
    // that differences of it lose the precision the check needs.
    const bool clamped = options.loss.type == nn::LossType::LogMSE &&
                         m.min_prediction <= options.log_prediction_margin;
    if (m.kink > options.kink_margin && !clamped) break;
  }

  const auto analytic = evaluate(model, batch, options.loss, mode, dropout_seed);
  const auto grad_views = std::visit([](const auto& p) { return p.views(); }, analytic.grads);
  const auto names = std::holds_alternative<GcnParams>(model)
                         ? std::vector<std::string>(GcnTensors::kNames.begin(), GcnTensors::kNames.end())
                         : std::get<GatParams>(model).view_names();

  Model probe = model;
  auto views = std::visit([](auto& p) { return p.views(); }, probe);
  for (std::size_t t = 0; t < views.size(); ++t) {
    for (std::size_t k = 0; k < views[t].size(); ++k) {
      const double saved = views[t][k];
      views[t][k] = saved + options.step;
      const double plus = evaluate(probe, batch, options.loss, mode, dropout_seed).loss;
      views[t][k] = saved - options.step;
      const double minus = evaluate(probe, batch, options.loss, mode, dropout_seed).loss;
      views[t][k] = saved;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double a = grad_views[t][k];
      const double rel =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), options.floor});
      ++result.parameters;
      if (rel > result.max_rel_error || result.worst_tensor.empty()) {
        result.max_rel_error = std::max(rel, result.max_rel_error);
        if (rel >= result.max_rel_error) {
          result.worst_tensor = names[t];
          result.worst_index = k;
          result.worst_analytic = a;
          result.worst_numeric = numeric;
        }
      }
    }
  }
  return result;
}

}  // namespace netloc
