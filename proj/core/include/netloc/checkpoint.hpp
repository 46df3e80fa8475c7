#pragma once

#include <string>

#include "netloc/train.hpp"

namespace netloc {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  TrainConfig config;
  Model model;
};

/// JSON container with a model-kind tag, the training config and every
/// tensor (name, shape, values) in round-trip precision.
std::string checkpoint_json(const Model& model, const TrainConfig& config);
void save_checkpoint(const std::string& path, const Model& model, const TrainConfig& config);

/// Throws VersionMismatch for an unknown format or version and CorruptFile
/// when tensors are missing or do not match the recorded shapes.
Checkpoint parse_checkpoint(std::string_view json_text);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace netloc
