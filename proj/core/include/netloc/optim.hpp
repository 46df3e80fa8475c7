#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace netloc {

enum class OptimizerKind { GD, Adam, AdamW };

std::string_view optimizer_name(OptimizerKind kind) noexcept;
OptimizerKind parse_optimizer(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double lr = 0.01;
  double weight_decay = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// w <- w - lr * g for every tensor. Throws DimensionMismatch on shape mismatch.
void gd_step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
             double lr);

/// Optimizer state: moment buffers per tensor plus the step count.
///
/// GD:    w <- w - lr (g + wd w)
/// Adam:  g' = g + wd w; bias-corrected moments of g'; w <- w - lr m^ / (sqrt(v^) + eps)
/// AdamW: w <- w (1 - lr wd), then the Adam update with the raw gradient.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config);

  const OptimizerConfig& config() const noexcept { return config_; }
  std::size_t step_count() const noexcept { return step_; }
  const std::vector<std::vector<double>>& first_moments() const noexcept { return m_; }
  const std::vector<std::vector<double>>& second_moments() const noexcept { return v_; }

  /// Moment buffers are sized on the first call; later calls must pass the
  /// same tensor shapes or DimensionMismatch is thrown.
  void step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads);

 private:
  OptimizerConfig config_;
  std::size_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace netloc
