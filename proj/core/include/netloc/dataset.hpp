#pragma once

#include <cmath>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netloc/error.hpp"
#include "netloc/graph.hpp"
#include "netloc/labeled_graph.hpp"
#include "netloc/rng.hpp"
#include "netloc/spectral.hpp"

namespace netloc {

struct SizeRange {
  std::size_t min = 200;
  std::size_t max = 300;
};

struct SplitSpec {
  SizeRange sizes;
  std::size_t count = 1000;
};

/// Families, size ranges and counts for a synthetic train/test pair.
/// Item i of a split uses families[i % families.size()].
struct DatasetSpec {
  std::vector<GraphFamily> families;
  SplitSpec train{{200, 300}, 1000};
  SplitSpec test{{400, 500}, 500};
  std::uint64_t seed = 1;
  RegionThresholds thresholds;
  PowerIterationOptions spectral;
  /// Resampling budget for random families that come out disconnected.
  std::size_t max_resample = 1000;

  void validate() const;
};

struct SyntheticDataset {
  std::vector<LabeledGraph> train;
  std::vector<LabeledGraph> test;
};

/// Labels `graph` via the spectral oracle and computes its features.
LabeledGraph make_labeled(std::string id, Graph graph, std::string family, std::uint64_t seed,
                          const PowerIterationOptions& spectral = {});

/// Deterministic given spec.seed. Sizes are uniform on each split's range;
/// disconnected random instances are redrawn with a fresh seed.
SyntheticDataset build_synthetic(const DatasetSpec& spec);

/// A graph read from an external dataset, before filtering and labeling.
struct RawGraph {
  std::string id;
  Graph graph;
  std::string source;
};

/// Reads `<DS>_A.txt` and `<DS>_graph_indicator.txt` from `dir` (1-indexed,
/// comma or whitespace separated). Duplicate and reversed edge rows collapse
/// and self-loops are dropped. Node attributes in other files are ignored.
/// Throws ParseError (with file and line) on missing or malformed files.
std::vector<RawGraph> ingest_tu_dataset(const std::string& dir);

/// True when g would survive preprocess(): connected with n >= 10.
bool passes_preprocess(const Graph& g);

/// Keeps connected graphs with at least 10 nodes and labels each survivor.
std::vector<LabeledGraph> preprocess(const std::vector<RawGraph>& graphs,
                                     const PowerIterationOptions& spectral = {});

/// Seeded Fisher-Yates shuffle, then the first round(fraction * size) items
/// form the first half. Throws InvalidParams unless 0 < fraction < 1 and
/// InvalidInput for an empty list.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split(std::vector<T> items, double fraction,
                                                std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "split fraction must lie in (0, 1)");
  }
  if (items.empty()) throw Error(ErrorKind::InvalidInput, "split of an empty list");
  Rng rng(seed);
  rng.shuffle(std::span<T>(items));
  const auto cut = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(items.size())));
  std::vector<T> second(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(cut)),
                        std::make_move_iterator(items.end()));
  items.resize(cut);
  return {std::move(items), std::move(second)};
}

/// Native layout: `manifest.json`, `graphs/<id>.edges`, `targets.csv`.
/// Targets are written in shortest round-trip form, so load(save(x)) == x.
void save_dataset(const std::string& dir, const std::vector<LabeledGraph>& items);

struct LoadOptions {
  /// Re-derive the target of every `verify_stride`-th item (0 disables) and
  /// throw CorruptFile when it differs by more than `verify_tolerance`.
  std::size_t verify_stride = 20;
  double verify_tolerance = 1e-9;
  PowerIterationOptions spectral;
};

/// Throws VersionMismatch for an unknown manifest format/version and
/// CorruptFile for inconsistent or unreadable contents.
std::vector<LabeledGraph> load_dataset(const std::string& dir, const LoadOptions& options = {});

inline constexpr int kDatasetVersion = 1;

}  // namespace netloc
