#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "netloc/checkpoint.hpp"
#include "netloc/config.hpp"
#include "netloc/dataset.hpp"
#include "netloc/error.hpp"
#include "netloc/features.hpp"
#include "netloc/gradcheck.hpp"
#include "netloc/spectral.hpp"
#include "netloc/train.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& common, bool out_required = false) {
  cmd->add_option("--seed", common.seed, "RNG seed (overrides the config)");
  cmd->add_option("--config", common.config, "JSON experiment config");
  auto* out = cmd->add_option("--out", common.out, "Output location");
  if (out_required) out->required();
}

netloc::ExperimentConfig config_or_default(const Common& common) {
  return common.config.empty() ? netloc::ExperimentConfig{} : netloc::load_config(common.config);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw netloc::Error(netloc::ErrorKind::IoError, "cannot write '" + path.string() + "'");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- generate ----

struct GenerateArgs {
  Common common;
  std::vector<std::string> families;
};

int run_generate(const GenerateArgs& args) {
  auto config = config_or_default(args.common);
  if (!args.families.empty()) {
    config.dataset.families.clear();
    for (const auto& name : args.families) {
      config.dataset.families.push_back({netloc::parse_family(name)});
    }
  }
  if (args.common.seed) config.dataset.seed = *args.common.seed;
  const auto start = std::chrono::steady_clock::now();
  const auto data = netloc::build_synthetic(config.dataset);
  const fs::path out(args.common.out);
  netloc::save_dataset((out / "train").string(), data.train);
  netloc::save_dataset((out / "test").string(), data.test);
  write_text(out / "config.json", netloc::dump_config(config));
  ordered_json j{{"train", data.train.size()}, {"test", data.test.size()}, {"out", out.string()}};
  std::cout << j.dump() << '\n';
  std::cerr << "generate: " << seconds_since(start) << " s\n";
  return 0;
}

// ---- spectral ----

struct SpectralArgs {
  Common common;
  std::string edges;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

int run_spectral(const SpectralArgs& args) {
  const auto config = config_or_default(args.common);
  const auto g = netloc::read_edge_list_file(args.edges);
  const auto r = netloc::power_iteration(g, {args.tol, args.max_iter});
  const double y = netloc::ipr(r.pev);
  const auto region = netloc::classify_region(y, config.train.thresholds);
  ordered_json j{{"n", g.node_count()},
                 {"m", g.edge_count()},
                 {"lambda1", r.lambda1},
                 {"ipr", y},
                 {"region", static_cast<int>(region)},
                 {"region_name", netloc::region_name(region)},
                 {"iterations", r.iterations},
                 {"residual", r.residual}};
  if (args.common.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_text(args.common.out, j.dump(2) + "\n");
  }
  return 0;
}

// ---- features ----

struct FeaturesArgs {
  Common common;
  std::string edges;
  bool raw = false;
};

int run_features(const FeaturesArgs& args) {
  const auto g = netloc::read_edge_list_file(args.edges);
  const auto m = args.raw ? netloc::raw_feature_matrix(g) : netloc::build_feature_matrix(g);
  std::ostringstream out;
  out << "node";
  for (const auto name : netloc::kFeatureNames) out << ',' << name;
  out << '\n';
  out.precision(17);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << r;
    for (double v : m.row(r)) out << ',' << v;
    out << '\n';
  }
  if (args.common.out.empty()) {
    std::cout << out.str();
  } else {
    write_text(args.common.out, out.str());
  }
  return 0;
}

// ---- ingest-tu ----

struct IngestArgs {
  Common common;
  std::string dir;
  double fraction = 0.8;
};

int run_ingest(const IngestArgs& args) {
  const auto config = config_or_default(args.common);
  const auto raw = netloc::ingest_tu_dataset(args.dir);
  const auto kept = netloc::preprocess(raw, config.dataset.spectral);
  const std::uint64_t seed = args.common.seed.value_or(config.dataset.seed);
  const fs::path out(args.common.out);
  std::size_t train_count = 0, test_count = 0;
  if (!kept.empty()) {
    auto [train, test] = netloc::split(kept, args.fraction, seed);
    netloc::save_dataset((out / "train").string(), train);
    netloc::save_dataset((out / "test").string(), test);
    train_count = train.size();
    test_count = test.size();
  }
  ordered_json j{{"raw", raw.size()},
                 {"kept", kept.size()},
                 {"train", train_count},
                 {"test", test_count},
                 {"out", out.string()}};
  std::cout << j.dump() << '\n';
  return 0;
}

// ---- train / eval ----

struct TrainArgs {
  Common common;
  std::string train_data;
  std::string test_data;
  std::optional<std::size_t> epochs;
  std::optional<std::string> model;
  std::optional<double> lr;
  std::optional<std::size_t> batch_size;
};

void emit_eval(const netloc::EvalReport& report, const std::string& dir) {
  netloc::write_report(report, dir);
  ordered_json j{{"count", report.rows.size()},
                 {"mse", report.mse},
                 {"region_accuracy", report.accuracy},
                 {"pearson", report.pearson},
                 {"report", dir}};
  std::cout << j.dump() << '\n';
  std::cerr << "eval: " << report.runtime_seconds << " s\n";
}

int run_train(const TrainArgs& args) {
  auto config = config_or_default(args.common);
  if (args.common.seed) config.train.seed = *args.common.seed;
  if (args.epochs) config.train.epochs = *args.epochs;
  if (args.model) config.train.model = netloc::parse_model(*args.model);
  if (args.lr) config.train.optimizer.lr = *args.lr;
  if (args.batch_size) config.train.batch_size = *args.batch_size;
  if (!args.train_data.empty()) config.train_data = args.train_data;
  if (!args.test_data.empty()) config.test_data = args.test_data;
  config.train.validate();

  const auto start = std::chrono::steady_clock::now();
  std::vector<netloc::LabeledGraph> train_set, test_set;
  if (config.train_data.empty()) {
    auto data = netloc::build_synthetic(config.dataset);
    train_set = std::move(data.train);
    if (config.test_data.empty()) test_set = std::move(data.test);
  } else {
    train_set = netloc::load_dataset(config.train_data);
  }
  if (!config.test_data.empty()) test_set = netloc::load_dataset(config.test_data);
  std::cerr << "train: data ready in " << seconds_since(start) << " s\n";

  const auto result = netloc::train(config.train, train_set);
  std::cerr << "train: " << config.train.epochs << " epochs in " << seconds_since(start) << " s\n";

  const fs::path out(args.common.out);
  fs::create_directories(out);
  netloc::save_checkpoint((out / "checkpoint.json").string(), result.model, config.train);
  netloc::write_loss_curve(result.loss_curve, (out / "loss_curve.csv").string());
  netloc::write_histograms(result.snapshots, config.train.histogram_bins,
                           (out / "histograms").string());
  write_text(out / "config.json", netloc::dump_config(config));

  ordered_json j{{"epochs", config.train.epochs},
                 {"final_loss", result.loss_curve.empty() ? 0.0 : result.loss_curve.back()},
                 {"checkpoint", (out / "checkpoint.json").string()}};
  std::cout << j.dump() << '\n';
  if (!test_set.empty()) {
    emit_eval(netloc::evaluate(result.model, test_set, config.train.thresholds),
              (out / "eval").string());
  }
  return 0;
}

struct EvalArgs {
  Common common;
  std::string checkpoint;
  std::string data;
};

int run_eval(const EvalArgs& args) {
  const auto cp = netloc::load_checkpoint(args.checkpoint);
  const auto thresholds = args.common.config.empty()
                              ? cp.config.thresholds
                              : netloc::load_config(args.common.config).train.thresholds;
  const auto data = netloc::load_dataset(args.data);
  emit_eval(netloc::evaluate(cp.model, data, thresholds), args.common.out);
  return 0;
}

// ---- gradcheck ----

struct GradcheckArgs {
  Common common;
  std::string model = "gcn";
  std::string loss = "mse";
  bool full_width = false;
  bool eval_mode = false;
};

int run_gradcheck(const GradcheckArgs& args) {
  netloc::GradcheckOptions options;
  if (args.loss == "log_mse") {
    options.loss.type = netloc::nn::LossType::LogMSE;
  } else if (args.loss != "mse") {
    throw netloc::Error(netloc::ErrorKind::InvalidParams, "unknown loss '" + args.loss + "'");
  }
  if (args.full_width) {
    options.gcn = netloc::GcnConfig{};
    options.gat = netloc::GatConfig{};
  }
  options.gat_train_mode = !args.eval_mode;
  const auto kind = netloc::parse_model(args.model);
  const std::uint64_t seed = args.common.seed.value_or(1);
  const auto r = netloc::gradcheck(kind, seed, options);
  constexpr double kLimit = 1e-4;
  ordered_json j{{"model", args.model},
                 {"seed", seed},
                 {"max_rel_error", r.max_rel_error},
                 {"parameters", r.parameters},
                 {"worst", {{"tensor", r.worst_tensor},
                            {"index", r.worst_index},
                            {"analytic", r.worst_analytic},
                            {"numeric", r.worst_numeric}}},
                 {"pass", r.max_rel_error < kLimit}};
  if (args.common.out.empty()) {
    std::cout << j.dump() << '\n';
  } else {
    write_text(args.common.out, j.dump(2) + "\n");
  }
  return r.max_rel_error < kLimit ? 0 : 1;
}

int report_error(std::string_view kind, const std::string& message) {
  ordered_json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Training allocates and frees many mid-sized matrices per graph; keeping
  // them on the heap avoids an mmap/munmap pair for each one.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  CLI::App app{"Eigenvector localization from graph structure"};
  app.name("netloc");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Build a synthetic train/test dataset");
  add_common(gen_cmd, gen.common, true);
  gen_cmd->add_option("--family", gen.families, "Families to generate (overrides the config)");

  SpectralArgs spec;
  auto* spec_cmd = app.add_subcommand("spectral", "Principal eigenpair, IPR and region of a graph");
  add_common(spec_cmd, spec.common);
  spec_cmd->add_option("edges", spec.edges, "Edge-list file")->required();
  spec_cmd->add_option("--tol", spec.tol, "Residual tolerance");
  spec_cmd->add_option("--max-iter", spec.max_iter, "Iteration budget");

  FeaturesArgs feat;
  auto* feat_cmd = app.add_subcommand("features", "Seven structural node features as CSV");
  add_common(feat_cmd, feat.common);
  feat_cmd->add_option("edges", feat.edges, "Edge-list file")->required();
  feat_cmd->add_flag("--raw", feat.raw, "Skip min-max scaling");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest-tu", "Convert a TU dataset into train/test sets");
  add_common(ingest_cmd, ingest.common, true);
  ingest_cmd->add_option("dir", ingest.dir, "TU dataset directory")->required();
  ingest_cmd->add_option("--fraction", ingest.fraction, "Training fraction");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write checkpoint and curves");
  add_common(train_cmd, tr.common, true);
  train_cmd->add_option("--train-data", tr.train_data, "Native dataset directory for training");
  train_cmd->add_option("--test-data", tr.test_data, "Native dataset directory for evaluation");
  train_cmd->add_option("--epochs", tr.epochs, "Epoch budget");
  train_cmd->add_option("--model", tr.model, "gcn or gat");
  train_cmd->add_option("--lr", tr.lr, "Learning rate");
  train_cmd->add_option("--batch-size", tr.batch_size, "Mini-batch size (0 = automatic)");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  add_common(eval_cmd, ev.common, true);
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--data", ev.data, "Native dataset directory")->required();

  GradcheckArgs gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Compare analytic and numeric gradients");
  add_common(gc_cmd, gc.common);
  gc_cmd->add_option("--model", gc.model, "gcn or gat")->check(CLI::IsMember({"gcn", "gat"}));
  gc_cmd->add_option("--loss", gc.loss, "mse or log_mse")->check(CLI::IsMember({"mse", "log_mse"}));
  gc_cmd->add_flag("--full-width", gc.full_width, "Use the default layer widths");
  gc_cmd->add_flag("--eval-mode", gc.eval_mode, "Check GAT without dropout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*gen_cmd) return run_generate(gen);
    if (*spec_cmd) return run_spectral(spec);
    if (*feat_cmd) return run_features(feat);
    if (*ingest_cmd) return run_ingest(ingest);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_eval(ev);
    if (*gc_cmd) return run_gradcheck(gc);
  } catch (const netloc::Error& e) {
    return report_error(netloc::kind_name(e.kind()), e.what());
  } catch (const fs::filesystem_error& e) {
    return report_error("io-error", e.what());
  } catch (const std::exception& e) {
    return report_error("internal-error", e.what());
  }
  return 2;
}
