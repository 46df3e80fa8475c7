#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "netloc/config.hpp"

namespace netloc::detail {

using nlohmann::ordered_json;

/// Throws ParseError when `j` is not an object or holds a key outside `allowed`.
void check_keys(const ordered_json& j, std::string_view where,
                std::initializer_list<std::string_view> allowed);

ordered_json train_to_json(const TrainConfig& config);
/// Fills `config` from `j`, keeping defaults for missing keys. The
/// thresholds are not part of this object.
void train_from_json(const ordered_json& j, TrainConfig& config);

ordered_json thresholds_to_json(const RegionThresholds& t);
RegionThresholds thresholds_from_json(const ordered_json& j);

}  // namespace netloc::detail
