#include <gtest/gtest.h>

#include <cmath>

#include "netloc/error.hpp"
#include "netloc/optim.hpp"
#include "netloc/rng.hpp"

namespace netloc {
namespace {

using Views = std::vector<std::span<double>>;
using ConstViews = std::vector<std::span<const double>>;

TEST(GradientDescent, Examples) {
  std::vector<double> w{1.0, -2.0};
  const std::vector<double> zero{0.0, 0.0};
  gd_step(Views{w}, ConstViews{zero}, 0.1);
  EXPECT_EQ(w, (std::vector<double>{1.0, -2.0}));

  std::vector<double> s{1.0};
  const std::vector<double> g{2.0};
  gd_step(Views{s}, ConstViews{g}, 0.1);
  EXPECT_DOUBLE_EQ(s[0], 0.8);

  std::vector<double> twice{0.5}, once{0.5};
  const std::vector<double> g1{0.3}, g2{-0.7}, sum{-0.4};
  gd_step(Views{twice}, ConstViews{g1}, 0.01);
  gd_step(Views{twice}, ConstViews{g2}, 0.01);
  gd_step(Views{once}, ConstViews{sum}, 0.01);
  EXPECT_NEAR(twice[0], once[0], 1e-15);
}

TEST(GradientDescent, ShapeMismatch) {
  std::vector<double> w{1.0, 2.0};
  const std::vector<double> g{1.0};
  try {
    gd_step(Views{w}, ConstViews{g}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Adam, FirstStepMatchesHandRecurrence) {
  OptimizerConfig c;
  c.weight_decay = 0.0;
  Optimizer opt(c);
  std::vector<double> w{0.5};
  const std::vector<double> g{1.0};
  opt.step(Views{w}, ConstViews{g});
  const double m = (1 - 0.9) * 1.0, v = (1 - 0.999) * 1.0;
  const double m_hat = m / (1 - 0.9), v_hat = v / (1 - 0.999);
  EXPECT_NEAR(w[0], 0.5 - 0.01 * m_hat / (std::sqrt(v_hat) + 1e-8), 1e-16);
  EXPECT_NEAR(0.5 - w[0], 0.00999999990, 1e-10);
  EXPECT_EQ(opt.step_count(), 1u);
}

TEST(Adam, ZeroGradientsFixOrDecay) {
  OptimizerConfig adam;
  adam.weight_decay = 0.0;
  Optimizer a(adam);
  std::vector<double> wa{0.7, -1.2};
  const std::vector<double> zero{0.0, 0.0};
  for (int i = 0; i < 100; ++i) a.step(Views{wa}, ConstViews{zero});
  EXPECT_EQ(wa, (std::vector<double>{0.7, -1.2}));

  OptimizerConfig adamw{OptimizerKind::AdamW, 0.01, 5e-4};
  Optimizer w(adamw);
  std::vector<double> ww{0.7, -1.2};
  for (int i = 0; i < 100; ++i) w.step(Views{ww}, ConstViews{zero});
  const double factor = std::pow(1 - 0.01 * 5e-4, 100);
  EXPECT_NEAR(ww[0], 0.7 * factor, 1e-15);
  EXPECT_NEAR(ww[1], -1.2 * factor, 1e-15);
}

TEST(Adam, MomentsDecay) {
  Optimizer opt({});
  std::vector<double> w{1.0};
  const std::vector<double> g{3.0}, zero{0.0};
  opt.step(Views{w}, ConstViews{g});
  for (int i = 0; i < 20000; ++i) opt.step(Views{w}, ConstViews{zero});
  EXPECT_LT(std::abs(opt.first_moments()[0][0]), 1e-12);
  EXPECT_LT(opt.second_moments()[0][0], 1e-7);
}

TEST(Adam, MatchesAdamWWithoutDecay) {
  OptimizerConfig a{OptimizerKind::Adam, 0.01, 0.0};
  OptimizerConfig b{OptimizerKind::AdamW, 0.01, 0.0};
  Optimizer oa(a), ob(b);
  std::vector<double> wa{0.3, -0.4, 0.9}, wb = wa;
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> g(3);
    for (double& x : g) x = rng.uniform(-1, 1);
    oa.step(Views{wa}, ConstViews{g});
    ob.step(Views{wb}, ConstViews{g});
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(wa[i], wb[i], 1e-15);
}

TEST(Adam, DeterministicAndShapeChecked) {
  Optimizer o1({}), o2({});
  std::vector<double> w1{0.1, 0.2}, w2{0.1, 0.2};
  const std::vector<double> g{0.5, -0.25};
  o1.step(Views{w1}, ConstViews{g});
  o2.step(Views{w2}, ConstViews{g});
  EXPECT_EQ(w1, w2);
  std::vector<double> wrong{1.0};
  const std::vector<double> gw{1.0};
  EXPECT_THROW(o1.step(Views{wrong}, ConstViews{gw}), Error);
}

TEST(Optimizers, ConvergeOnQuadratic) {
  for (auto kind : {OptimizerKind::GD, OptimizerKind::Adam, OptimizerKind::AdamW}) {
    Optimizer opt({kind, 0.01, 5e-4});
    std::vector<double> w{0.0};
    for (int i = 0; i < 5000; ++i) {
      const std::vector<double> g{2.0 * (w[0] - 3.0)};
      opt.step(Views{w}, ConstViews{g});
    }
    EXPECT_LT(std::abs(w[0] - 3.0), 1e-3) << optimizer_name(kind);
  }
}

TEST(Optimizers, Names) {
  for (auto kind : {OptimizerKind::GD, OptimizerKind::Adam, OptimizerKind::AdamW}) {
    EXPECT_EQ(parse_optimizer(optimizer_name(kind)), kind);
  }
  EXPECT_THROW(parse_optimizer("sgd-momentum"), Error);
}

}  // namespace
}  // namespace netloc
