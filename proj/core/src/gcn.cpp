#include "netloc/gcn.hpp"

#include <string>

#include "netloc/error.hpp"
#include "netloc/parallel.hpp"
#include "netloc/rng.hpp"

namespace netloc {

namespace {

constexpr std::size_t kBlockSize = 8;

void add_into(DenseMatrix& into, const DenseMatrix& other) {
  if (into.rows() != other.rows() || into.cols() != other.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "gradient accumulation shape mismatch");
  }
  auto a = into.values();
  const auto b = other.values();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

bool same_shape(const DenseMatrix& a, std::size_t rows, std::size_t cols) {
  return a.rows() == rows && a.cols() == cols;
}

}  // namespace

GcnTensors GcnTensors::zeros(const GcnConfig& c) {
  return {DenseMatrix(c.input_dim, c.k0), DenseMatrix(c.k0, c.k1), DenseMatrix(c.k1, c.k2),
          DenseMatrix(c.k2, 1), 0.0};
}

GcnConfig GcnTensors::config() const { return {w0.rows(), w0.cols(), w1.cols(), w2.cols()}; }

std::vector<std::span<double>> GcnTensors::views() {
  return {w0.values(), w1.values(), w2.values(), wlin.values(), std::span<double>(&b, 1)};
}

std::vector<std::span<const double>> GcnTensors::views() const {
  return {w0.values(), w1.values(), w2.values(), wlin.values(), std::span<const double>(&b, 1)};
}

GcnTensors& GcnTensors::operator+=(const GcnTensors& other) {
  add_into(w0, other.w0);
  add_into(w1, other.w1);
  add_into(w2, other.w2);
  add_into(wlin, other.wlin);
  b += other.b;
  return *this;
}

GcnParams init_gcn(const GcnConfig& c, std::uint64_t seed) {
  Rng rng(seed);
  GcnParams p;
  p.w0 = nn::glorot_init(c.input_dim, c.k0, rng);
  p.w1 = nn::glorot_init(c.k0, c.k1, rng);
  p.w2 = nn::glorot_init(c.k1, c.k2, rng);
  p.wlin = nn::glorot_init(c.k2, 1, rng);
  p.b = 0.0;
  return p;
}

DenseMatrix gcn_propagate(const DenseMatrix& ahat, const DenseMatrix& h, const DenseMatrix& w) {
  return nn::matmul(nn::matmul(ahat, h), w);
}

GcnOutput gcn_forward(const GcnParams& params, const DenseMatrix& ahat, const FeatureMatrix& h0) {
  if (ahat.rows() != ahat.cols() || ahat.rows() != h0.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "gcn_forward: Ahat is " + std::to_string(ahat.rows()) +
                                                  "x" + std::to_string(ahat.cols()) + " but H(0) has " +
                                                  std::to_string(h0.rows()) + " rows");
  }
  if (params.wlin.cols() != 1 || params.wlin.rows() != params.w2.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "gcn_forward: Wlin must be k2 x 1");
  }
  GcnOutput out;
  auto& a = out.acts;
  a.ahat = ahat;
  a.h[0] = h0;
  const std::array<const DenseMatrix*, 3> weights = {&params.w0, &params.w1, &params.w2};
  for (std::size_t l = 0; l < 3; ++l) {
    a.propagated[l] = nn::matmul(ahat, a.h[l]);
    a.q[l] = nn::matmul(a.propagated[l], *weights[l]);
    a.h[l + 1] = nn::relu(a.q[l]);
  }
  a.z = nn::mean_rows(a.h[3]);
  double y = params.b;
  for (std::size_t c = 0; c < a.z.size(); ++c) y += a.z[c] * params.wlin(c, 0);
  a.yhat = y;
  out.yhat = y;
  return out;
}

GcnGradients gcn_backward(const GcnParams& params, const GcnActivations& acts, double dl_dyhat) {
  const std::size_t n = acts.h[0].rows();
  const GcnConfig c = params.config();
  const bool consistent =
      n > 0 && same_shape(acts.ahat, n, n) && same_shape(acts.h[0], n, c.input_dim) &&
      same_shape(acts.q[0], n, c.k0) && same_shape(acts.q[1], n, c.k1) &&
      same_shape(acts.q[2], n, c.k2) && acts.z.size() == c.k2 &&
      same_shape(params.wlin, c.k2, 1);
  if (!consistent) {
    throw Error(ErrorKind::StaleActivation, "gcn_backward: activations do not match parameters");
  }

  GcnGradients g;
  g.b = dl_dyhat;
  g.wlin = DenseMatrix(c.k2, 1);
  for (std::size_t i = 0; i < c.k2; ++i) g.wlin(i, 0) = dl_dyhat * acts.z[i];

  // Mean-pool: every node row receives dL/dz / n.
  DenseMatrix d_h(n, c.k2);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < c.k2; ++j) d_h(r, j) = dl_dyhat * params.wlin(j, 0) * inv_n;
  }

  const std::array<const DenseMatrix*, 3> weights = {&params.w0, &params.w1, &params.w2};
  std::array<DenseMatrix*, 3> grads = {&g.w0, &g.w1, &g.w2};
  for (std::size_t l = 3; l-- > 0;) {
    const DenseMatrix d_q = nn::relu_backward(acts.q[l], d_h);
    *grads[l] = nn::matmul_tn(acts.propagated[l], d_q);
    if (l > 0) d_h = nn::matmul_tn(acts.ahat, nn::matmul_nt(d_q, *weights[l]));
  }
  return g;
}

GcnBatchResult gcn_batch_step(const GcnParams& params, std::span<const LabeledGraph> batch,
                              const nn::LossKind& kind) {
  if (batch.empty()) throw Error(ErrorKind::InvalidInput, "gcn_batch_step: empty batch");
  struct Acc {
    GcnGradients grads;
    double loss = 0.0;
    Acc& operator+=(const Acc& o) {
      grads += o.grads;
      loss += o.loss;
      return *this;
    }
  };
  std::vector<double> predictions(batch.size());
  const Acc zero{GcnTensors::zeros(params.config()), 0.0};
  Acc total = ordered_block_reduce(batch.size(), kBlockSize, zero, [&](std::size_t i, Acc& acc) {
    const auto& item = batch[i];
    const auto out = gcn_forward(params, nn::normalized_adjacency(item.graph), item.features);
    predictions[i] = out.yhat;
    acc.loss += nn::loss_term(out.yhat, item.target, kind);
    const double d = nn::loss_grad_term(out.yhat, item.target, batch.size(), kind);
    acc.grads += gcn_backward(params, out.acts, d);
  });
  return {total.loss / static_cast<double>(batch.size()), std::move(total.grads),
          std::move(predictions)};
}

double gcn_predict(const GcnParams& params, const LabeledGraph& item) {
  return gcn_forward(params, nn::normalized_adjacency(item.graph), item.features).yhat;
}

}  // namespace netloc
