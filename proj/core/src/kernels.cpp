#include "netloc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netloc/error.hpp"

namespace netloc::nn {

namespace {

[[noreturn]] void shape_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  throw Error(ErrorKind::DimensionMismatch,
              std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                  " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = a(i, k);
      // Normalized adjacencies and ReLU outputs are mostly zeros.
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto arow = a.row(k);
    const auto brow = b.row(k);
    for (std::size_t i = 0; i < arow.size(); ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      auto out = c.row(i);
      for (std::size_t j = 0; j < brow.size(); ++j) out[j] += aki * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto brow = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < arow.size(); ++k) s += arow[k] * brow[k];
      c(i, j) = s;
    }
  }
  return c;
}

DenseMatrix normalized_adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(static_cast<NodeId>(i)) + 1));
  }
  DenseMatrix ahat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    ahat(i, i) = inv_sqrt[i] * inv_sqrt[i];
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) ahat(i, j) = inv_sqrt[i] * inv_sqrt[j];
  }
  return ahat;
}

std::vector<double> mean_rows(const DenseMatrix& h) {
  std::vector<double> z(h.cols(), 0.0);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    const auto row = h.row(r);
    for (std::size_t c = 0; c < z.size(); ++c) z[c] += row[c];
  }
  const double inv = h.rows() == 0 ? 0.0 : 1.0 / static_cast<double>(h.rows());
  for (double& v : z) v *= inv;
  return z;
}

DenseMatrix relu(const DenseMatrix& x) {
  DenseMatrix y = x;
  for (double& v : y.values()) v = relu(v);
  return y;
}

DenseMatrix relu_backward(const DenseMatrix& pre, const DenseMatrix& upstream) {
  if (pre.rows() != upstream.rows() || pre.cols() != upstream.cols()) {
    shape_error("relu_backward", pre, upstream);
  }
  DenseMatrix d = upstream;
  auto dv = d.values();
  const auto pv = pre.values();
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] *= relu_grad(pv[i]);
  return d;
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double peak = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

DenseMatrix glorot_init(std::size_t f_in, std::size_t f_out, Rng& rng) {
  if (f_in == 0 || f_out == 0) throw Error(ErrorKind::InvalidSize, "glorot_init needs f_in, f_out >= 1");
  const double bound = std::sqrt(6.0 / static_cast<double>(f_in + f_out));
  DenseMatrix w(f_in, f_out);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  return w;
}

DenseMatrix glorot_init(std::size_t f_in, std::size_t f_out, std::uint64_t seed) {
  Rng rng(seed);
  return glorot_init(f_in, f_out, rng);
}

namespace {

void check_loss_inputs(std::span<const double> pred, std::span<const double> target,
                       const LossKind& kind) {
  if (pred.size() != target.size()) {
    throw Error(ErrorKind::DimensionMismatch, "loss: prediction/target length mismatch");
  }
  if (pred.empty()) throw Error(ErrorKind::InvalidInput, "loss: empty batch");
  if (kind.type == LossType::LogMSE) {
    if (!(kind.log_floor > 0.0)) throw Error(ErrorKind::InvalidParams, "log_floor must be > 0");
    for (double y : target) {
      if (!(y > 0.0)) throw Error(ErrorKind::InvalidInput, "LogMSE needs positive targets");
    }
  }
}

double log_floored(double x, double floor) { return std::log(std::max(x, floor)); }

}  // namespace

double loss_term(double pred, double target, const LossKind& kind) {
  const double diff = kind.type == LossType::MSE
                          ? pred - target
                          : log_floored(pred, kind.log_floor) - log_floored(target, kind.log_floor);
  return diff * diff;
}

double loss_grad_term(double pred, double target, std::size_t batch_size, const LossKind& kind) {
  const double scale = 2.0 / static_cast<double>(batch_size);
  if (kind.type == LossType::MSE) return scale * (pred - target);
  if (pred <= kind.log_floor) return 0.0;  // flat below the floor
  return scale * (std::log(pred) - log_floored(target, kind.log_floor)) / pred;
}

double loss(std::span<const double> pred, std::span<const double> target, const LossKind& kind) {
  check_loss_inputs(pred, target, kind);
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) total += loss_term(pred[i], target[i], kind);
  return total / static_cast<double>(pred.size());
}

std::vector<double> loss_grad(std::span<const double> pred, std::span<const double> target,
                              const LossKind& kind) {
  check_loss_inputs(pred, target, kind);
  std::vector<double> grad(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    grad[i] = loss_grad_term(pred[i], target[i], pred.size(), kind);
  }
  return grad;
}

}  // namespace netloc::nn
