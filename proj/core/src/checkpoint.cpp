#include "netloc/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "config_json.hpp"
#include "netloc/error.hpp"

namespace netloc {

using detail::ordered_json;

namespace {

std::vector<std::string> names_of(const Model& model) {
  if (std::holds_alternative<GcnParams>(model)) {
    return {GcnTensors::kNames.begin(), GcnTensors::kNames.end()};
  }
  return std::get<GatParams>(model).view_names();
}

}  // namespace

std::string checkpoint_json(const Model& model, const TrainConfig& config) {
  ordered_json j;
  j["format"] = "netloc-checkpoint";
  j["version"] = kCheckpointVersion;
  j["model"] = model_name(model_kind(model));
  j["config"] = {{"train", detail::train_to_json(config)},
                 {"thresholds", detail::thresholds_to_json(config.thresholds)}};
  const auto names = names_of(model);
  const auto views = std::visit([](const auto& p) { return p.views(); }, model);
  ordered_json tensors = ordered_json::array();
  for (std::size_t t = 0; t < views.size(); ++t) {
    tensors.push_back({{"name", names[t]},
                       {"size", views[t].size()},
                       {"values", std::vector<double>(views[t].begin(), views[t].end())}});
  }
  j["tensors"] = std::move(tensors);
  return j.dump(1) + "\n";
}

void save_checkpoint(const std::string& path, const Model& model, const TrainConfig& config) {
  std::ofstream out(path, std::ios::binary);
  out << checkpoint_json(model, config);
  if (!out) throw Error(ErrorKind::IoError, "cannot write checkpoint '" + path + "'");
}

Checkpoint parse_checkpoint(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptFile, std::string("checkpoint: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "netloc-checkpoint" || !j.contains("version") ||
      !j["version"].is_number_integer() || j["version"].get<int>() != kCheckpointVersion) {
    throw Error(ErrorKind::VersionMismatch,
                "not a netloc-checkpoint version " + std::to_string(kCheckpointVersion));
  }
  try {
    Checkpoint cp{TrainConfig{}, GcnParams{}};
    detail::train_from_json(j.at("config").at("train"), cp.config);
    cp.config.thresholds = detail::thresholds_from_json(j.at("config").at("thresholds"));
    const ModelKind kind = parse_model(j.at("model").get<std::string>());
    if (kind != cp.config.model) {
      throw Error(ErrorKind::CorruptFile, "checkpoint model tag disagrees with its config");
    }
    if (kind == ModelKind::GCN) {
      cp.model = GcnTensors::zeros(cp.config.gcn);
    } else {
      cp.model = GatTensors::zeros(cp.config.gat);
    }
    const auto names = names_of(cp.model);
    auto views = std::visit([](auto& p) { return p.views(); }, cp.model);
    const auto& tensors = j.at("tensors");
    if (tensors.size() != views.size()) {
      throw Error(ErrorKind::CorruptFile, "checkpoint has the wrong number of tensors");
    }
    for (std::size_t t = 0; t < views.size(); ++t) {
      const auto& entry = tensors[t];
      const auto values = entry.at("values").get<std::vector<double>>();
      if (entry.at("name").get<std::string>() != names[t] || values.size() != views[t].size()) {
        throw Error(ErrorKind::CorruptFile, "checkpoint tensor '" + names[t] + "' does not match");
      }
      std::copy(values.begin(), values.end(), views[t].begin());
    }
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptFile, std::string("checkpoint: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open checkpoint '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_checkpoint(text.str());
}

}  // namespace netloc
