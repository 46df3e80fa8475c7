#pragma once

#include <cstdint>
#include <string>

#include "netloc/features.hpp"
#include "netloc/graph.hpp"

namespace netloc {

/// One regression example: graph, structural features H(0) and IPR target.
struct LabeledGraph {
  std::string id;
  Graph graph;
  FeatureMatrix features;
  double target = 0.0;
  /// Generator family name, or the dataset name for ingested graphs.
  std::string family;
  std::uint64_t seed = 0;
};

}  // namespace netloc
