#include "netloc/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "format.hpp"
#include "json.hpp"
#include "netloc/features.hpp"
#include "netloc/parallel.hpp"

namespace netloc {

namespace fs = std::filesystem;
using nlohmann::json;

void DatasetSpec::validate() const {
  if (families.empty()) throw Error(ErrorKind::InvalidParams, "dataset spec lists no families");
  for (const auto* s : {&train, &test}) {
    if (s->count == 0) throw Error(ErrorKind::InvalidParams, "dataset split count must be >= 1");
    if (s->sizes.min > s->sizes.max) {
      throw Error(ErrorKind::InvalidParams, "dataset size range is empty");
    }
    for (const auto& f : families) {
      f.validate(s->sizes.min);
      f.validate(s->sizes.max);
    }
  }
  thresholds.validate();
}

LabeledGraph make_labeled(std::string id, Graph graph, std::string family, std::uint64_t seed,
                          const PowerIterationOptions& spectral) {
  LabeledGraph item;
  item.id = std::move(id);
  item.target = label_graph(graph, spectral);
  item.features = build_feature_matrix(graph);
  item.graph = std::move(graph);
  item.family = std::move(family);
  item.seed = seed;
  return item;
}

namespace {

std::string item_id(std::string_view prefix, std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return std::string(prefix) + "-" + digits;
}

std::vector<LabeledGraph> build_split(const DatasetSpec& spec, const SplitSpec& split_spec,
                                      std::string_view name, std::uint64_t stream) {
  struct Pending {
    Graph graph;
    std::string family;
    std::uint64_t seed;
  };
  std::vector<Pending> pending;
  pending.reserve(split_spec.count);
  for (std::size_t i = 0; i < split_spec.count; ++i) {
    const GraphFamily& family = spec.families[i % spec.families.size()];
    const std::uint64_t instance_seed = mix_seed(spec.seed, (stream << 32) + i);
    Rng rng(instance_seed);
    const auto n = static_cast<std::size_t>(rng.uniform_int(split_spec.sizes.min, split_spec.sizes.max));
    std::size_t attempt = 0;
    for (;; ++attempt) {
      if (attempt > spec.max_resample) {
        throw Error(ErrorKind::InvalidParams,
                    std::string(family_name(family.tag)) + " instance with n=" + std::to_string(n) +
                        " stayed disconnected after " + std::to_string(spec.max_resample) +
                        " redraws");
      }
      const std::uint64_t graph_seed = mix_seed(instance_seed, attempt);
      Graph g = generate(family, n, graph_seed);
      if (is_connected(g)) {
        pending.push_back({std::move(g), std::string(family_name(family.tag)), graph_seed});
        break;
      }
    }
  }

  std::vector<LabeledGraph> items(pending.size());
  parallel_for(pending.size(), [&](std::size_t i) {
    items[i] = make_labeled(item_id(name, i), std::move(pending[i].graph),
                            std::move(pending[i].family), pending[i].seed, spec.spectral);
  });
  return items;
}

}  // namespace

SyntheticDataset build_synthetic(const DatasetSpec& spec) {
  spec.validate();
  return {build_split(spec, spec.train, "train", 0), build_split(spec, spec.test, "test", 1)};
}

bool passes_preprocess(const Graph& g) { return g.node_count() >= 10 && is_connected(g); }

std::vector<LabeledGraph> preprocess(const std::vector<RawGraph>& graphs,
                                     const PowerIterationOptions& spectral) {
  std::vector<const RawGraph*> kept;
  for (const auto& raw : graphs) {
    if (passes_preprocess(raw.graph)) kept.push_back(&raw);
  }
  std::vector<LabeledGraph> items(kept.size());
  parallel_for(kept.size(), [&](std::size_t i) {
    items[i] = make_labeled(kept[i]->id, kept[i]->graph, kept[i]->source, 0, spectral);
  });
  return items;
}

void save_dataset(const std::string& dir, const std::vector<LabeledGraph>& items) {
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "graphs", ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create dataset directory '" + dir + "'");

  json manifest;
  manifest["format"] = "netloc-dataset";
  manifest["version"] = kDatasetVersion;
  manifest["count"] = items.size();
  json entries = json::array();
  std::ostringstream targets;
  targets << "id,target,family,n\n";
  for (const auto& item : items) {
    const std::string file = "graphs/" + item.id + ".edges";
    write_edge_list_file((fs::path(dir) / file).string(), item.graph);
    entries.push_back({{"id", item.id},
                       {"file", file},
                       {"family", item.family},
                       {"n", item.graph.node_count()},
                       {"m", item.graph.edge_count()},
                       {"seed", item.seed}});
    targets << item.id << ',' << detail::format_double(item.target) << ',' << item.family << ','
            << item.graph.node_count() << '\n';
  }
  manifest["items"] = std::move(entries);

  std::ofstream mf(fs::path(dir) / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  std::ofstream tf(fs::path(dir) / "targets.csv", std::ios::binary);
  tf << targets.str();
  if (!mf || !tf) throw Error(ErrorKind::IoError, "failed writing dataset '" + dir + "'");
}

namespace {

[[noreturn]] void corrupt(const std::string& dir, const std::string& what) {
  throw Error(ErrorKind::CorruptFile, "dataset '" + dir + "': " + what);
}

struct TargetRow {
  double target = 0.0;
  std::string family;
  std::size_t n = 0;
};

std::map<std::string, TargetRow> read_targets(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "targets.csv");
  if (!in) corrupt(dir, "missing targets.csv");
  std::string line;
  if (!std::getline(in, line) || line != "id,target,family,n") corrupt(dir, "bad targets.csv header");
  std::map<std::string, TargetRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    TargetRow row;
    if (cells.size() != 4 || !detail::parse_double(cells[1], row.target)) {
      corrupt(dir, "targets.csv line " + std::to_string(line_no) + " is malformed");
    }
    row.family = cells[2];
    try {
      row.n = std::stoul(cells[3]);
    } catch (const std::exception&) {
      corrupt(dir, "targets.csv line " + std::to_string(line_no) + " has a bad node count");
    }
    rows.emplace(cells[0], std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<LabeledGraph> load_dataset(const std::string& dir, const LoadOptions& options) {
  std::ifstream mf(fs::path(dir) / "manifest.json");
  if (!mf) throw Error(ErrorKind::IoError, "cannot open '" + dir + "/manifest.json'");
  json manifest;
  try {
    manifest = json::parse(mf);
  } catch (const json::exception& e) {
    corrupt(dir, std::string("manifest.json: ") + e.what());
  }
  if (!manifest.is_object() || manifest.value("format", "") != "netloc-dataset" ||
      !manifest.contains("version") || !manifest["version"].is_number_integer() ||
      manifest["version"].get<int>() != kDatasetVersion) {
    throw Error(ErrorKind::VersionMismatch,
                "dataset '" + dir + "' is not a netloc-dataset version " +
                    std::to_string(kDatasetVersion));
  }

  const auto targets = read_targets(dir);
  std::vector<LabeledGraph> items;
  try {
    const auto& entries = manifest.at("items");
    if (manifest.at("count").get<std::size_t>() != entries.size()) corrupt(dir, "count mismatch");
    items.resize(entries.size());
    std::vector<std::string> files(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      items[i].id = e.at("id").get<std::string>();
      items[i].family = e.at("family").get<std::string>();
      items[i].seed = e.at("seed").get<std::uint64_t>();
      files[i] = e.at("file").get<std::string>();
      const auto it = targets.find(items[i].id);
      if (it == targets.end()) corrupt(dir, "no target for '" + items[i].id + "'");
      items[i].target = it->second.target;
    }
    parallel_for(items.size(), [&](std::size_t i) {
      auto& item = items[i];
      try {
        item.graph = read_edge_list_file((fs::path(dir) / files[i]).string());
      } catch (const Error& err) {
        corrupt(dir, files[i] + ": " + err.what());
      }
      if (item.graph.node_count() != targets.at(item.id).n) {
        corrupt(dir, "node count of '" + item.id + "' disagrees with targets.csv");
      }
      item.features = build_feature_matrix(item.graph);
      if (options.verify_stride > 0 && i % options.verify_stride == 0) {
        const double fresh = label_graph(item.graph, options.spectral);
        if (std::abs(fresh - item.target) > options.verify_tolerance) {
          corrupt(dir, "stored target of '" + item.id + "' fails re-verification");
        }
      }
    });
  } catch (const json::exception& e) {
    corrupt(dir, std::string("manifest.json: ") + e.what());
  }
  return items;
}

}  // namespace netloc
