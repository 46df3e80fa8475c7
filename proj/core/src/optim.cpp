#include "netloc/optim.hpp"

#include <cmath>
#include <string>

#include "netloc/error.hpp"

namespace netloc {

std::string_view optimizer_name(OptimizerKind kind) noexcept {
  switch (kind) {
    case OptimizerKind::GD: return "gd";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::AdamW: return "adamw";
  }
  return "unknown";
}

OptimizerKind parse_optimizer(std::string_view name) {
  for (auto k : {OptimizerKind::GD, OptimizerKind::Adam, OptimizerKind::AdamW}) {
    if (optimizer_name(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidParams, "unknown optimizer '" + std::string(name) + "'");
}

namespace {

void check_shapes(std::span<const std::span<double>> params,
                  std::span<const std::span<const double>> grads) {
  if (params.size() != grads.size()) {
    throw Error(ErrorKind::DimensionMismatch, "optimizer: tensor count mismatch");
  }
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (params[t].size() != grads[t].size()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "optimizer: tensor " + std::to_string(t) + " shape mismatch");
    }
  }
}

}  // namespace

void gd_step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
             double lr) {
  check_shapes(params, grads);
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i) params[t][i] -= lr * grads[t][i];
  }
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) {
  if (!(config_.lr > 0.0)) throw Error(ErrorKind::InvalidParams, "learning rate must be > 0");
  if (!(config_.weight_decay >= 0.0)) throw Error(ErrorKind::InvalidParams, "weight decay must be >= 0");
}

void Optimizer::step(std::span<const std::span<double>> params,
                     std::span<const std::span<const double>> grads) {
  check_shapes(params, grads);
  const double lr = config_.lr;
  const double wd = config_.weight_decay;

  if (config_.kind == OptimizerKind::GD) {
    for (std::size_t t = 0; t < params.size(); ++t) {
      for (std::size_t i = 0; i < params[t].size(); ++i) {
        params[t][i] -= lr * (grads[t][i] + wd * params[t][i]);
      }
    }
    ++step_;
    return;
  }

  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  } else {
    bool same = m_.size() == params.size();
    for (std::size_t t = 0; same && t < params.size(); ++t) same = m_[t].size() == params[t].size();
    if (!same) throw Error(ErrorKind::DimensionMismatch, "optimizer state built for other shapes");
  }

  ++step_;
  const double t = static_cast<double>(step_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  const bool decoupled = config_.kind == OptimizerKind::AdamW;

  for (std::size_t k = 0; k < params.size(); ++k) {
    auto w = params[k];
    const auto g = grads[k];
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      double gi = g[i];
      if (decoupled) {
        w[i] *= 1.0 - lr * wd;
      } else {
        gi += wd * w[i];
      }
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * gi;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * gi * gi;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.eps);
    }
  }
}

}  // namespace netloc
