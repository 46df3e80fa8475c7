#include "netloc/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "config_json.hpp"
#include "netloc/error.hpp"

namespace netloc {

namespace detail {

void check_keys(const ordered_json& j, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw Error(ErrorKind::ParseError, "config: '" + std::string(where) + "' must be an object");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw Error(ErrorKind::ParseError,
                  "config: unknown key '" + item.key() + "' in '" + std::string(where) + "'");
    }
  }
}

namespace {

template <typename T>
void read(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string_view loss_name(nn::LossType t) { return t == nn::LossType::MSE ? "mse" : "log_mse"; }

nn::LossType parse_loss(const std::string& name) {
  if (name == "mse") return nn::LossType::MSE;
  if (name == "log_mse") return nn::LossType::LogMSE;
  throw Error(ErrorKind::InvalidParams, "unknown loss '" + name + "'");
}

ordered_json family_to_json(const GraphFamily& f) {
  return {{"family", family_name(f.tag)},
          {"edge_probability", f.edge_probability},
          {"mean_degree", f.mean_degree},
          {"attachments", f.attachments}};
}

GraphFamily family_from_json(const ordered_json& j) {
  check_keys(j, "families[]", {"family", "edge_probability", "mean_degree", "attachments"});
  GraphFamily f;
  f.tag = parse_family(j.at("family").get<std::string>());
  read(j, "edge_probability", f.edge_probability);
  read(j, "mean_degree", f.mean_degree);
  read(j, "attachments", f.attachments);
  return f;
}

ordered_json split_to_json(const SplitSpec& s) {
  return {{"min_n", s.sizes.min}, {"max_n", s.sizes.max}, {"count", s.count}};
}

void split_from_json(const ordered_json& j, std::string_view where, SplitSpec& s) {
  check_keys(j, where, {"min_n", "max_n", "count"});
  read(j, "min_n", s.sizes.min);
  read(j, "max_n", s.sizes.max);
  read(j, "count", s.count);
}

ordered_json spectral_to_json(const PowerIterationOptions& o) {
  return {{"tol", o.tol}, {"max_iter", o.max_iter}};
}

void spectral_from_json(const ordered_json& j, PowerIterationOptions& o) {
  check_keys(j, "dataset.spectral", {"tol", "max_iter"});
  read(j, "tol", o.tol);
  read(j, "max_iter", o.max_iter);
}

ordered_json dataset_to_json(const DatasetSpec& d) {
  ordered_json families = ordered_json::array();
  for (const auto& f : d.families) families.push_back(family_to_json(f));
  return {{"families", families},
          {"train", split_to_json(d.train)},
          {"test", split_to_json(d.test)},
          {"seed", d.seed},
          {"max_resample", d.max_resample},
          {"spectral", spectral_to_json(d.spectral)}};
}

void dataset_from_json(const ordered_json& j, DatasetSpec& d) {
  check_keys(j, "dataset", {"families", "train", "test", "seed", "max_resample", "spectral"});
  if (j.contains("families")) {
    d.families.clear();
    for (const auto& f : j.at("families")) d.families.push_back(family_from_json(f));
  }
  if (j.contains("train")) split_from_json(j.at("train"), "dataset.train", d.train);
  if (j.contains("test")) split_from_json(j.at("test"), "dataset.test", d.test);
  read(j, "seed", d.seed);
  read(j, "max_resample", d.max_resample);
  if (j.contains("spectral")) spectral_from_json(j.at("spectral"), d.spectral);
}

}  // namespace

ordered_json thresholds_to_json(const RegionThresholds& t) {
  return {{"tau1", t.tau1}, {"tau2", t.tau2}, {"epsilon", t.epsilon}};
}

RegionThresholds thresholds_from_json(const ordered_json& j) {
  check_keys(j, "thresholds", {"tau1", "tau2", "epsilon"});
  RegionThresholds t;
  read(j, "tau1", t.tau1);
  read(j, "tau2", t.tau2);
  read(j, "epsilon", t.epsilon);
  return t;
}

ordered_json train_to_json(const TrainConfig& c) {
  return {{"model", model_name(c.model)},
          {"gcn", {{"input_dim", c.gcn.input_dim}, {"k0", c.gcn.k0}, {"k1", c.gcn.k1}, {"k2", c.gcn.k2}}},
          {"gat",
           {{"input_dim", c.gat.input_dim},
            {"heads", c.gat.heads},
            {"hidden", c.gat.hidden},
            {"output", c.gat.output},
            {"dropout", c.gat.dropout},
            {"leaky_slope", c.gat.leaky_slope}}},
          {"loss", loss_name(c.loss.type)},
          {"log_floor", c.loss.log_floor},
          {"optimizer",
           {{"kind", optimizer_name(c.optimizer.kind)},
            {"lr", c.optimizer.lr},
            {"weight_decay", c.optimizer.weight_decay},
            {"beta1", c.optimizer.beta1},
            {"beta2", c.optimizer.beta2},
            {"eps", c.optimizer.eps}}},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"snapshot_epochs", c.snapshot_epochs},
          {"histogram_bins", c.histogram_bins},
          {"init_bias_to_mean", c.init_bias_to_mean}};
}

void train_from_json(const ordered_json& j, TrainConfig& c) {
  check_keys(j, "train",
             {"model", "gcn", "gat", "loss", "log_floor", "optimizer", "epochs", "batch_size",
              "seed", "snapshot_epochs", "histogram_bins", "init_bias_to_mean"});
  if (j.contains("model")) c.model = parse_model(j.at("model").get<std::string>());
  if (j.contains("gcn")) {
    const auto& g = j.at("gcn");
    check_keys(g, "train.gcn", {"input_dim", "k0", "k1", "k2"});
    read(g, "input_dim", c.gcn.input_dim);
    read(g, "k0", c.gcn.k0);
    read(g, "k1", c.gcn.k1);
    read(g, "k2", c.gcn.k2);
  }
  if (j.contains("gat")) {
    const auto& g = j.at("gat");
    check_keys(g, "train.gat", {"input_dim", "heads", "hidden", "output", "dropout", "leaky_slope"});
    read(g, "input_dim", c.gat.input_dim);
    read(g, "heads", c.gat.heads);
    read(g, "hidden", c.gat.hidden);
    read(g, "output", c.gat.output);
    read(g, "dropout", c.gat.dropout);
    read(g, "leaky_slope", c.gat.leaky_slope);
  }
  if (j.contains("loss")) c.loss.type = parse_loss(j.at("loss").get<std::string>());
  read(j, "log_floor", c.loss.log_floor);
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    check_keys(o, "train.optimizer", {"kind", "lr", "weight_decay", "beta1", "beta2", "eps"});
    if (o.contains("kind")) c.optimizer.kind = parse_optimizer(o.at("kind").get<std::string>());
    read(o, "lr", c.optimizer.lr);
    read(o, "weight_decay", c.optimizer.weight_decay);
    read(o, "beta1", c.optimizer.beta1);
    read(o, "beta2", c.optimizer.beta2);
    read(o, "eps", c.optimizer.eps);
  }
  read(j, "epochs", c.epochs);
  read(j, "batch_size", c.batch_size);
  read(j, "seed", c.seed);
  read(j, "snapshot_epochs", c.snapshot_epochs);
  read(j, "histogram_bins", c.histogram_bins);
  read(j, "init_bias_to_mean", c.init_bias_to_mean);
}

}  // namespace detail

ExperimentConfig parse_config(std::string_view json_text) {
  using detail::ordered_json;
  ExperimentConfig config;
  try {
    const auto j = ordered_json::parse(json_text);
    detail::check_keys(j, "config", {"schema_version", "dataset", "thresholds", "train", "data"});
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
        j.at("schema_version").get<int>() != kConfigSchemaVersion) {
      throw Error(ErrorKind::VersionMismatch,
                  "config: schema_version must be " + std::to_string(kConfigSchemaVersion));
    }
    if (j.contains("dataset")) detail::dataset_from_json(j.at("dataset"), config.dataset);
    if (j.contains("thresholds")) {
      config.dataset.thresholds = detail::thresholds_from_json(j.at("thresholds"));
      config.train.thresholds = config.dataset.thresholds;
    }
    if (j.contains("train")) detail::train_from_json(j.at("train"), config.train);
    if (j.contains("data")) {
      const auto& d = j.at("data");
      detail::check_keys(d, "data", {"train", "test"});
      detail::read(d, "train", config.train_data);
      detail::read(d, "test", config.test_data);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  config.train.validate();
  config.dataset.thresholds.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const ExperimentConfig& config) {
  detail::ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["dataset"] = detail::dataset_to_json(config.dataset);
  j["thresholds"] = detail::thresholds_to_json(config.train.thresholds);
  j["train"] = detail::train_to_json(config.train);
  j["data"] = {{"train", config.train_data}, {"test", config.test_data}};
  return j.dump(2) + "\n";
}

}  // namespace netloc
