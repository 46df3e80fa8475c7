#pragma once

#include <string>
#include <string_view>

#include "netloc/dataset.hpp"
#include "netloc/train.hpp"

namespace netloc {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything one experiment needs: the synthetic dataset recipe, the
/// training setup and optional paths to prepared datasets. The top-level
/// "thresholds" object feeds both the dataset and the training setup.
struct ExperimentConfig {
  DatasetSpec dataset;
  TrainConfig train;
  std::string train_data;
  std::string test_data;
};

/// Missing keys keep their defaults; unknown keys are rejected. Throws
/// ParseError for malformed JSON or wrong value types, VersionMismatch for an
/// unsupported schema_version, and InvalidParams for invalid values.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON (all keys present) that parse_config() reads back.
std::string dump_config(const ExperimentConfig& config);

}  // namespace netloc
