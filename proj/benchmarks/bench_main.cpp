#include <benchmark/benchmark.h>

#include <vector>

#include "netloc/dataset.hpp"
#include "netloc/features.hpp"
#include "netloc/gat.hpp"
#include "netloc/gcn.hpp"
#include "netloc/spectral.hpp"

namespace {

using namespace netloc;

Graph connected_er(std::size_t n) {
  for (std::uint64_t seed = n;; ++seed) {
    Graph g = make_er(n, 8.0 / static_cast<double>(n), seed);
    if (is_connected(g)) return g;
  }
}

void BM_PowerIterationEr(benchmark::State& state) {
  const Graph g = connected_er(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(power_iteration(g).lambda1);
}
BENCHMARK(BM_PowerIterationEr)->Arg(100)->Arg(500)->Arg(2000);

void BM_PowerIterationPath(benchmark::State& state) {
  const Graph g = make_path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(power_iteration(g, {1e-10, 2000000}).lambda1);
}
BENCHMARK(BM_PowerIterationPath)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FeatureMatrix(benchmark::State& state) {
  const Graph g = make_scale_free(static_cast<std::size_t>(state.range(0)), 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_feature_matrix(g));
}
BENCHMARK(BM_FeatureMatrix)->Arg(100)->Arg(300)->Arg(500)->Unit(benchmark::kMillisecond);

std::vector<LabeledGraph> batch_of(std::size_t n, std::size_t count) {
  std::vector<LabeledGraph> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(make_labeled("b", make_scale_free(n, 2, 10 + i), "scale_free", 0));
  }
  return out;
}

void BM_GcnForward(benchmark::State& state) {
  const auto items = batch_of(static_cast<std::size_t>(state.range(0)), 1);
  const GcnParams p = init_gcn({}, 1);
  const DenseMatrix ahat = nn::normalized_adjacency(items[0].graph);
  for (auto _ : state) benchmark::DoNotOptimize(gcn_forward(p, ahat, items[0].features).yhat);
}
BENCHMARK(BM_GcnForward)->Arg(50)->Arg(250)->Arg(500);

void BM_GcnBatchStep(benchmark::State& state) {
  const auto items = batch_of(static_cast<std::size_t>(state.range(0)), 8);
  const GcnParams p = init_gcn({}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gcn_batch_step(p, items, {}).loss);
}
BENCHMARK(BM_GcnBatchStep)->Arg(50)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_GatForward(benchmark::State& state) {
  const auto items = batch_of(static_cast<std::size_t>(state.range(0)), 1);
  const GatParams p = init_gat({}, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gat_forward(p, items[0].graph, items[0].features, Mode::Eval, 0).yhat);
  }
}
BENCHMARK(BM_GatForward)->Arg(50)->Arg(250)->Arg(500);

void BM_GatBatchStep(benchmark::State& state) {
  const auto items = batch_of(static_cast<std::size_t>(state.range(0)), 8);
  const GatParams p = init_gat({}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gat_batch_step(p, items, {}, Mode::Train, 7).loss);
}
BENCHMARK(BM_GatBatchStep)->Arg(50)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
