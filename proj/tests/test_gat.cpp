#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "netloc/dataset.hpp"
#include "netloc/error.hpp"
#include "netloc/gat.hpp"
#include "netloc/gradcheck.hpp"
#include "support/finite_diff.hpp"
#include "support/oracles.hpp"

namespace netloc {
namespace {

GatConfig small_config(double dropout = 0.6) { return {kFeatureCount, 4, 4, 8, dropout, 0.2}; }

TEST(Attention, Scores) {
  const std::vector<double> wh_i{0.3, -0.7}, wh_j{1.1, 0.4};
  EXPECT_EQ(attention_score(wh_i, wh_j, std::vector<double>(4, 0.0)), 0.0);
  const std::vector<double> a{0.5, -0.2, 0.9, 0.1};
  EXPECT_EQ(attention_score(wh_i, wh_j, a), attention_score(wh_i, wh_j, a));
  EXPECT_EQ(attention_score(std::vector<double>{1, 0}, std::vector<double>{0, 1},
                            std::vector<double>{1, 1, 1, -1}),
            0.0);
  // Negative pre-activation takes the leaky branch.
  EXPECT_DOUBLE_EQ(attention_score(std::vector<double>{1, 0}, std::vector<double>{0, 0},
                                   std::vector<double>{-1, 0, 0, 0}),
                   -0.2);
}

TEST(Attention, Normalize) {
  for (double w : attention_normalize(std::vector<double>{0.7, 0.7, 0.7, 0.7})) {
    EXPECT_DOUBLE_EQ(w, 0.25);
  }
  const auto w = attention_normalize(std::vector<double>{std::log(2.0), std::log(1.0)});
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0 / 3.0, 1e-15);
  const std::vector<double> s{0.1, -2.0, 3.5, 0.4};
  auto shifted = s;
  for (double& x : shifted) x += 17.25;
  const auto a = attention_normalize(s), b = attention_normalize(shifted);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Attention, SoftmaxJacobian) {
  Rng rng(8);
  std::vector<double> e(4);
  for (double& x : e) x = rng.uniform(-2, 2);
  const auto alpha = attention_normalize(e);
  const double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    auto up = e, down = e;
    up[j] += h;
    down[j] -= h;
    const auto ap = attention_normalize(up), am = attention_normalize(down);
    for (int i = 0; i < 4; ++i) {
      const double analytic = (i == j ? alpha[i] : 0.0) - alpha[i] * alpha[j];
      EXPECT_NEAR((ap[i] - am[i]) / (2 * h), analytic, 1e-9);
    }
  }
}

TEST(GatLayer, SingleNodeUsesSelfLoop) {
  GatHead head{DenseMatrix{{1.0, -2.0}, {0.5, 1.0}}, {0.3, 0.1, -0.4, 0.2}};
  const DenseMatrix h{{2.0, 1.0}};
  const DenseMatrix out = gat_layer(std::span<const GatHead>(&head, 1), Graph(1, {}), h);
  EXPECT_EQ(out, (DenseMatrix{{2.5, 0.0}}));
}

TEST(GatLayer, RegularGraphWithIdenticalFeatures) {
  const GatParams p = init_gat(small_config(), 2);
  const Graph g = make_cycle(8);
  const DenseMatrix h(8, kFeatureCount, 0.4);
  const DenseMatrix out = gat_layer(p.layer1, g, h);
  for (std::size_t r = 1; r < 8; ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) EXPECT_EQ(out(r, c), out(0, c));
  }
}

TEST(GatLayer, ShapeMismatch) {
  const GatParams p = init_gat(small_config(), 2);
  try {
    gat_layer(p.layer1, make_cycle(5), DenseMatrix(5, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(GatForward, EvalIsDeterministicAndTrainIsSeeded) {
  const GatParams p = init_gat({}, 4);
  const auto item = make_labeled("w", make_wheel(12), "wheel", 0);
  const double a = gat_forward(p, item.graph, item.features, Mode::Eval).yhat;
  EXPECT_EQ(gat_forward(p, item.graph, item.features, Mode::Eval, 99).yhat, a);
  EXPECT_EQ(gat_predict(p, item), a);
  const double t1 = gat_forward(p, item.graph, item.features, Mode::Train, 5).yhat;
  EXPECT_EQ(gat_forward(p, item.graph, item.features, Mode::Train, 5).yhat, t1);
  EXPECT_NE(gat_forward(p, item.graph, item.features, Mode::Train, 6).yhat, t1);
}

TEST(GatForward, ZeroWeightsGiveBias) {
  GatParams p = GatTensors::zeros({});
  p.b = -0.125;
  const auto item = make_labeled("s", make_star(9), "star", 0);
  EXPECT_EQ(gat_predict(p, item), -0.125);
  EXPECT_EQ(gat_forward(p, item.graph, item.features, Mode::Train, 3).yhat, -0.125);
}

TEST(GatForward, AttentionWeightsAreDistributions) {
  const GatParams p = init_gat({}, 6);
  const Graph g = testing::random_connected(15, 0.3, 2);
  const auto item = make_labeled("g", g, "er", 0);
  const auto out = gat_forward(p, g, item.features, Mode::Eval);
  const auto& nb = out.acts.neighborhood;
  for (const auto& layer : out.acts.layers) {
    for (const auto& head : layer.heads) {
      for (std::size_t i = 0; i < nb.node_count(); ++i) {
        double sum = 0.0;
        for (std::size_t e = nb.offsets[i]; e < nb.offsets[i + 1]; ++e) {
          EXPECT_GT(head.alpha[e], 0.0);
          sum += head.alpha[e];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(GatForward, PermutationInvariantInEvalMode) {
  const GatParams p = init_gat({}, 7);
  const Graph g = testing::random_connected(18, 0.25, 5);
  const auto item = make_labeled("g", g, "er", 0);
  std::vector<NodeId> perm(18);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(1);
  rng.shuffle(std::span<NodeId>(perm));
  const auto moved = make_labeled("g", g.relabeled(perm), "er", 0);
  EXPECT_NEAR(gat_predict(p, moved), gat_predict(p, item), 1e-10);
}

TEST(GatBackward, ZeroUpstreamAndStaleActivations) {
  const GatParams p = init_gat({}, 3);
  const auto item = make_labeled("w", make_wheel(7), "wheel", 0);
  const auto out = gat_forward(p, item.graph, item.features, Mode::Train, 1);
  EXPECT_EQ(gat_backward(p, out.acts, 0.0), GatTensors::zeros(p.config()));
  const GatParams other = init_gat(small_config(), 3);
  try {
    gat_backward(other, out.acts, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StaleActivation);
  }
}

TEST(GatBackward, StarLayerFiniteDifferences) {
  const GatParams p = init_gat(small_config(0.0), 12);
  const std::vector<LabeledGraph> batch{testing::with_random_features(make_star(5), 0.2, 3)};
  EXPECT_LT(testing::max_fd_error(p, batch), 1e-4);
}

TEST(GatBackward, PathFiniteDifferencesEvalMode) {
  const GatParams p = init_gat(small_config(), 13);
  const std::vector<LabeledGraph> batch{testing::with_random_features(make_path(6), 0.1, 5)};
  EXPECT_LT(testing::max_fd_error(p, batch, {}, Mode::Eval), 1e-4);
}

TEST(GatBackward, GradcheckOverTwentySeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = gradcheck(ModelKind::GAT, seed);
    EXPECT_LT(r.max_rel_error, 1e-4) << "seed " << seed << " worst " << r.worst_tensor;
  }
}

TEST(GatBackward, GradcheckLogLossAndEvalMode) {
  GradcheckOptions options;
  options.loss.type = nn::LossType::LogMSE;
  EXPECT_LT(gradcheck(ModelKind::GAT, 31, options).max_rel_error, 1e-4);
  options.gat_train_mode = false;
  EXPECT_LT(gradcheck(ModelKind::GAT, 32, options).max_rel_error, 1e-4);
  EXPECT_LT(gradcheck(ModelKind::GCN, 33, options).max_rel_error, 1e-4);
}

}  // namespace
}  // namespace netloc
