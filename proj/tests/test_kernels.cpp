#include <gtest/gtest.h>

#include <cmath>

#include "netloc/error.hpp"
#include "netloc/kernels.hpp"
#include "netloc/rng.hpp"
#include "support/oracles.hpp"

namespace netloc {
namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  DenseMatrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1, 1);
  return m;
}

TEST(Matmul, IdentityAndShapes) {
  Rng rng(1);
  const DenseMatrix x = random_matrix(4, 3, rng);
  EXPECT_EQ(nn::matmul(DenseMatrix::identity(4), x), x);
  try {
    nn::matmul(x, x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Matmul, WorkedExampleOne) {
  const DenseMatrix a{{1, 2}, {3, 4}};
  const DenseMatrix h{{1, 0, 2}, {-1, 3, 1}};
  const DenseMatrix w{{1, 2}, {0, 1}, {-1, 0}};
  const DenseMatrix e = nn::matmul(a, h);
  EXPECT_EQ(e, (DenseMatrix{{-1, 6, 4}, {-1, 12, 10}}));
  EXPECT_EQ(nn::matmul(e, w), (DenseMatrix{{-5, 4}, {-11, 10}}));
}

TEST(Matmul, TransposedVariantsAndAssociativity) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const DenseMatrix a = random_matrix(5, 4, rng);
    const DenseMatrix b = random_matrix(4, 6, rng);
    const DenseMatrix c = random_matrix(6, 3, rng);
    const DenseMatrix left = nn::matmul(nn::matmul(a, b), c);
    const DenseMatrix right = nn::matmul(a, nn::matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      EXPECT_NEAR(left.values()[i], right.values()[i], 1e-9 * std::max(1.0, std::abs(left.values()[i])));
    }
    EXPECT_EQ(nn::matmul_tn(a.transposed(), b), nn::matmul(a, b));
    const DenseMatrix nt = nn::matmul_nt(a, b.transposed());
    const DenseMatrix ref = nn::matmul(a, b);
    for (std::size_t i = 0; i < nt.size(); ++i) EXPECT_NEAR(nt.values()[i], ref.values()[i], 1e-14);
  }
}

TEST(NormalizedAdjacency, SingleEdge) {
  const DenseMatrix a = nn::normalized_adjacency(make_path(2));
  for (double v : a.values()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(NormalizedAdjacency, SymmetricWithUnitSpectralRadius) {
  const DenseMatrix s = nn::normalized_adjacency(make_star(5));
  EXPECT_EQ(s, s.transposed());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = testing::random_connected(10 + seed * 2, 0.2, seed);
    const auto eig = testing::jacobi_eigen(nn::normalized_adjacency(g));
    EXPECT_NEAR(eig.values.front(), 1.0, 1e-8);
    EXPECT_GE(eig.values.back(), -1.0 - 1e-8);
  }
}

TEST(Activations, Examples) {
  EXPECT_EQ(nn::relu(-2.0), 0.0);
  EXPECT_EQ(nn::relu(3.0), 3.0);
  EXPECT_EQ(nn::relu_grad(0.0), 0.0);
  EXPECT_EQ(nn::relu_grad(1e-300), 1.0);
  EXPECT_DOUBLE_EQ(nn::leaky_relu(-1.0, 0.2), -0.2);
  EXPECT_EQ(nn::leaky_relu_grad(-1.0, 0.2), 0.2);
  const auto uniform = nn::softmax(std::vector<double>{3.0, 3.0, 3.0, 3.0, 3.0});
  for (double p : uniform) EXPECT_DOUBLE_EQ(p, 0.2);
  const auto big = nn::softmax(std::vector<double>{1000.0, 1000.0 + std::log(3.0)});
  EXPECT_NEAR(big[0], 0.25, 1e-12);
}

TEST(Activations, ReluBackwardMasks) {
  const DenseMatrix pre{{-1.0, 0.0, 2.0}};
  const DenseMatrix up{{5.0, 5.0, 5.0}};
  EXPECT_EQ(nn::relu_backward(pre, up), (DenseMatrix{{0.0, 0.0, 5.0}}));
}

TEST(Glorot, BoundAndDeterminism) {
  const DenseMatrix w = nn::glorot_init(7, 64, 123);
  const double limit = std::sqrt(6.0 / 71.0);
  EXPECT_NEAR(limit, 0.290701, 1e-6);
  for (double v : w.values()) EXPECT_LE(std::abs(v), limit);
  EXPECT_EQ(w, nn::glorot_init(7, 64, 123));
  EXPECT_NE(w, nn::glorot_init(7, 64, 124));
}

TEST(Glorot, MeanIsZero) {
  const DenseMatrix w = nn::glorot_init(1000, 1000, 9);
  double sum = 0.0;
  for (double v : w.values()) sum += v;
  const double limit = std::sqrt(6.0 / 2000.0);
  const double sigma = limit / std::sqrt(3.0) / std::sqrt(1e6);
  EXPECT_LT(std::abs(sum / 1e6), 4 * sigma);
}

TEST(Loss, Examples) {
  const nn::LossKind mse;
  const nn::LossKind log{nn::LossType::LogMSE, 1e-12};
  const std::vector<double> y{0.1, 0.2, 0.3};
  EXPECT_EQ(nn::loss(y, y, mse), 0.0);
  EXPECT_NEAR(nn::loss(std::vector<double>{0.3}, std::vector<double>{0.25}, mse), 0.0025, 1e-16);
  EXPECT_NEAR(nn::loss(std::vector<double>{0.1}, std::vector<double>{0.01}, log),
              std::pow(std::log(10.0), 2), 1e-12);
  EXPECT_NEAR(nn::loss(std::vector<double>{0.1}, std::vector<double>{0.01}, log), 5.3019, 1e-4);
  for (double g : nn::loss_grad(y, y, mse)) EXPECT_EQ(g, 0.0);
}

TEST(Loss, Errors) {
  const std::vector<double> a{0.1, 0.2};
  const std::vector<double> b{0.1};
  EXPECT_THROW(nn::loss(a, b, {}), Error);
  EXPECT_THROW(nn::loss(std::vector<double>{}, std::vector<double>{}, {}), Error);
  EXPECT_THROW(nn::loss(b, std::vector<double>{0.0}, {nn::LossType::LogMSE, 1e-12}), Error);
}

TEST(Loss, GradientCoefficients) {
  const std::vector<double> pred{0.4, 0.1, 0.7};
  const std::vector<double> target{0.1, 0.3, 0.2};
  const auto g = nn::loss_grad(pred, target, {});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(g[i], (2.0 / 3.0) * (pred[i] - target[i]), 1e-15);
}

TEST(Loss, GradientMatchesFiniteDifferences) {
  Rng rng(6);
  for (auto type : {nn::LossType::MSE, nn::LossType::LogMSE}) {
    const nn::LossKind kind{type, 1e-12};
    std::vector<double> pred(5), target(5);
    for (int i = 0; i < 5; ++i) {
      pred[i] = rng.uniform(0.05, 0.9);
      target[i] = rng.uniform(0.05, 0.9);
    }
    const auto g = nn::loss_grad(pred, target, kind);
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i) {
      auto up = pred, down = pred;
      up[i] += h;
      down[i] -= h;
      const double numeric = (nn::loss(up, target, kind) - nn::loss(down, target, kind)) / (2 * h);
      EXPECT_LT(std::abs(numeric - g[i]) / std::max(std::abs(g[i]), 1e-8), 1e-7);
    }
  }
}

TEST(Loss, LogFloorGradientIsZero) {
  const nn::LossKind log{nn::LossType::LogMSE, 1e-12};
  EXPECT_EQ(nn::loss_grad(std::vector<double>{-0.5}, std::vector<double>{0.1}, log)[0], 0.0);
}

}  // namespace
}  // namespace netloc
