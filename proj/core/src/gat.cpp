#include "netloc/gat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netloc/error.hpp"
#include "netloc/parallel.hpp"
#include "netloc/rng.hpp"

namespace netloc {

namespace {

constexpr std::size_t kBlockSize = 8;

void add_into(std::span<double> into, std::span<const double> other) {
  if (into.size() != other.size()) {
    throw Error(ErrorKind::DimensionMismatch, "gradient accumulation shape mismatch");
  }
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += other[i];
}

GatHead zero_head(std::size_t f_in, std::size_t f_out) {
  return {DenseMatrix(f_in, f_out), std::vector<double>(2 * f_out, 0.0)};
}

GatHead init_head(std::size_t f_in, std::size_t f_out, Rng& rng) {
  GatHead h;
  h.w = nn::glorot_init(f_in, f_out, rng);
  const DenseMatrix a = nn::glorot_init(2 * f_out, 1, rng);
  h.a.assign(a.values().begin(), a.values().end());
  return h;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Draws a keep-factor mask: 0 with probability p, 1/(1-p) otherwise.
std::vector<double> dropout_mask(std::size_t count, double p, Rng& rng) {
  std::vector<double> keep(count);
  const double scale = 1.0 / (1.0 - p);
  for (double& k : keep) k = rng.uniform01() < p ? 0.0 : scale;
  return keep;
}

GatLayerCache layer_forward(std::span<const GatHead> heads, const AttentionNeighborhood& nb,
                            const DenseMatrix& h_in, double slope, double dropout, Rng* rng) {
  const std::size_t n = nb.node_count();
  if (h_in.rows() != n) throw Error(ErrorKind::DimensionMismatch, "gat layer: input rows != n");
  const std::size_t width = heads.front().w.cols();
  for (const auto& head : heads) {
    if (head.w.rows() != h_in.cols() || head.w.cols() != width || head.a.size() != 2 * width) {
      throw Error(ErrorKind::DimensionMismatch, "gat layer: head shapes do not conform");
    }
  }

  GatLayerCache cache;
  cache.input = h_in;
  const bool train = rng != nullptr && dropout > 0.0;
  if (train) {
    cache.input_keep = dropout_mask(h_in.size(), dropout, *rng);
    auto x = cache.input.values();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= cache.input_keep[i];
  }

  cache.pre_activation = DenseMatrix(n, heads.size() * width);
  cache.heads.resize(heads.size());
  for (std::size_t k = 0; k < heads.size(); ++k) {
    const GatHead& head = heads[k];
    GatHeadCache& hc = cache.heads[k];
    hc.z = nn::matmul(cache.input, head.w);
    const std::span<const double> a_self(head.a.data(), width);
    const std::span<const double> a_nbr(head.a.data() + width, width);
    std::vector<double> s_self(n), s_nbr(n);
    for (std::size_t i = 0; i < n; ++i) {
      s_self[i] = dot(hc.z.row(i), a_self);
      s_nbr[i] = dot(hc.z.row(i), a_nbr);
    }
    hc.pre.resize(nb.nodes.size());
    hc.alpha.resize(nb.nodes.size());
    if (train) hc.keep = dropout_mask(nb.nodes.size(), dropout, *rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t begin = nb.offsets[i], end = nb.offsets[i + 1];
      std::vector<double> scores(end - begin);
      for (std::size_t e = begin; e < end; ++e) {
        hc.pre[e] = s_self[i] + s_nbr[nb.nodes[e]];
        scores[e - begin] = nn::leaky_relu(hc.pre[e], slope);
      }
      const auto alpha = nn::softmax(scores);
      auto out = cache.pre_activation.row(i).subspan(k * width, width);
      for (std::size_t e = begin; e < end; ++e) {
        hc.alpha[e] = alpha[e - begin];
        const double coeff = train ? hc.alpha[e] * hc.keep[e] : hc.alpha[e];
        if (coeff == 0.0) continue;
        const auto zj = hc.z.row(nb.nodes[e]);
        for (std::size_t f = 0; f < width; ++f) out[f] += coeff * zj[f];
      }
    }
  }
  cache.output = nn::relu(cache.pre_activation);
  return cache;
}

/// Returns dL/d(layer input before dropout) and accumulates head gradients.
DenseMatrix layer_backward(std::span<const GatHead> heads, std::span<GatHead> head_grads,
                           const GatLayerCache& cache, const AttentionNeighborhood& nb,
                           const DenseMatrix& d_out, double slope, bool need_input_grad) {
  const std::size_t n = nb.node_count();
  const std::size_t width = heads.front().w.cols();
  const DenseMatrix d_pre = nn::relu_backward(cache.pre_activation, d_out);
  DenseMatrix d_input(n, cache.input.cols());

  for (std::size_t k = 0; k < heads.size(); ++k) {
    const GatHead& head = heads[k];
    const GatHeadCache& hc = cache.heads[k];
    const bool dropped = !hc.keep.empty();
    const std::span<const double> a_self(head.a.data(), width);
    const std::span<const double> a_nbr(head.a.data() + width, width);

    DenseMatrix d_z(n, width);
    std::vector<double> ds_self(n, 0.0), ds_nbr(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t begin = nb.offsets[i], end = nb.offsets[i + 1];
      const auto d_oi = d_pre.row(i).subspan(k * width, width);
      std::vector<double> d_alpha(end - begin);
      double weighted = 0.0;
      for (std::size_t e = begin; e < end; ++e) {
        const NodeId j = nb.nodes[e];
        const double keep = dropped ? hc.keep[e] : 1.0;
        const double coeff = hc.alpha[e] * keep;
        auto d_zj = d_z.row(j);
        for (std::size_t f = 0; f < width; ++f) d_zj[f] += coeff * d_oi[f];
        d_alpha[e - begin] = dot(d_oi, hc.z.row(j)) * keep;
        weighted += hc.alpha[e] * d_alpha[e - begin];
      }
      // Softmax Jacobian: d_e = alpha * (d_alpha - sum(alpha * d_alpha)).
      for (std::size_t e = begin; e < end; ++e) {
        const double d_score = hc.alpha[e] * (d_alpha[e - begin] - weighted);
        const double d_pre_e = d_score * nn::leaky_relu_grad(hc.pre[e], slope);
        ds_self[i] += d_pre_e;
        ds_nbr[nb.nodes[e]] += d_pre_e;
      }
    }

    GatHead& grad = head_grads[k];
    for (std::size_t i = 0; i < n; ++i) {
      const auto zi = hc.z.row(i);
      auto d_zi = d_z.row(i);
      for (std::size_t f = 0; f < width; ++f) {
        grad.a[f] += ds_self[i] * zi[f];
        grad.a[width + f] += ds_nbr[i] * zi[f];
        d_zi[f] += ds_self[i] * a_self[f] + ds_nbr[i] * a_nbr[f];
      }
    }
    const DenseMatrix d_w = nn::matmul_tn(cache.input, d_z);
    add_into(grad.w.values(), d_w.values());
    if (need_input_grad) {
      const DenseMatrix d_x = nn::matmul_nt(d_z, head.w);
      add_into(d_input.values(), d_x.values());
    }
  }
  if (need_input_grad && !cache.input_keep.empty()) {
    auto dv = d_input.values();
    for (std::size_t i = 0; i < dv.size(); ++i) dv[i] *= cache.input_keep[i];
  }
  return d_input;
}

}  // namespace

GatTensors GatTensors::zeros(const GatConfig& c) {
  GatTensors t;
  t.layer1.reserve(c.heads);
  for (std::size_t k = 0; k < c.heads; ++k) t.layer1.push_back(zero_head(c.input_dim, c.hidden));
  t.layer2 = zero_head(c.heads * c.hidden, c.output);
  t.wlin = DenseMatrix(c.output, 1);
  t.b = 0.0;
  t.dropout = c.dropout;
  t.leaky_slope = c.leaky_slope;
  return t;
}

GatConfig GatTensors::config() const {
  GatConfig c;
  c.heads = layer1.size();
  c.input_dim = layer1.empty() ? 0 : layer1.front().w.rows();
  c.hidden = layer1.empty() ? 0 : layer1.front().w.cols();
  c.output = layer2.w.cols();
  c.dropout = dropout;
  c.leaky_slope = leaky_slope;
  return c;
}

std::vector<std::span<double>> GatTensors::views() {
  std::vector<std::span<double>> v;
  for (auto& h : layer1) {
    v.push_back(h.w.values());
    v.push_back(h.a);
  }
  v.push_back(layer2.w.values());
  v.push_back(layer2.a);
  v.push_back(wlin.values());
  v.push_back(std::span<double>(&b, 1));
  return v;
}

std::vector<std::span<const double>> GatTensors::views() const {
  std::vector<std::span<const double>> v;
  for (const auto& h : layer1) {
    v.push_back(h.w.values());
    v.push_back(h.a);
  }
  v.push_back(layer2.w.values());
  v.push_back(layer2.a);
  v.push_back(wlin.values());
  v.push_back(std::span<const double>(&b, 1));
  return v;
}

std::vector<std::string> GatTensors::view_names() const {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < layer1.size(); ++k) {
    names.push_back("L1H" + std::to_string(k) + ".W");
    names.push_back("L1H" + std::to_string(k) + ".a");
  }
  names.insert(names.end(), {"L2.W", "L2.a", "Wlin", "b"});
  return names;
}

GatTensors& GatTensors::operator+=(const GatTensors& other) {
  auto mine = views();
  const auto theirs = other.views();
  if (mine.size() != theirs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "gradient accumulation shape mismatch");
  }
  for (std::size_t i = 0; i < mine.size(); ++i) add_into(mine[i], theirs[i]);
  return *this;
}

GatParams init_gat(const GatConfig& c, std::uint64_t seed) {
  if (c.heads == 0 || c.hidden == 0 || c.output == 0 || c.input_dim == 0) {
    throw Error(ErrorKind::InvalidParams, "GAT widths and head count must be >= 1");
  }
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "GAT dropout must lie in [0, 1)");
  }
  Rng rng(seed);
  GatParams p;
  for (std::size_t k = 0; k < c.heads; ++k) p.layer1.push_back(init_head(c.input_dim, c.hidden, rng));
  p.layer2 = init_head(c.heads * c.hidden, c.output, rng);
  p.wlin = nn::glorot_init(c.output, 1, rng);
  p.b = 0.0;
  p.dropout = c.dropout;
  p.leaky_slope = c.leaky_slope;
  return p;
}

double attention_score(std::span<const double> wh_i, std::span<const double> wh_j,
                       std::span<const double> a, double slope) {
  if (wh_i.size() != wh_j.size() || a.size() != 2 * wh_i.size()) {
    throw Error(ErrorKind::DimensionMismatch, "attention_score: a must have length 2F'");
  }
  return nn::leaky_relu(dot(a.first(wh_i.size()), wh_i) + dot(a.last(wh_j.size()), wh_j), slope);
}

std::vector<double> attention_normalize(std::span<const double> scores) { return nn::softmax(scores); }

AttentionNeighborhood AttentionNeighborhood::from_graph(const Graph& g) {
  AttentionNeighborhood nb;
  const std::size_t n = g.node_count();
  nb.offsets.reserve(n + 1);
  nb.offsets.push_back(0);
  nb.nodes.reserve(2 * g.edge_count() + n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto neighbors = g.neighbors(static_cast<NodeId>(i));
    const auto split = std::lower_bound(neighbors.begin(), neighbors.end(), static_cast<NodeId>(i));
    nb.nodes.insert(nb.nodes.end(), neighbors.begin(), split);
    nb.nodes.push_back(static_cast<NodeId>(i));
    nb.nodes.insert(nb.nodes.end(), split, neighbors.end());
    nb.offsets.push_back(nb.nodes.size());
  }
  return nb;
}

DenseMatrix gat_layer(std::span<const GatHead> heads, const Graph& g, const DenseMatrix& h_in,
                      double slope) {
  if (heads.empty()) throw Error(ErrorKind::InvalidParams, "gat_layer needs at least one head");
  const auto nb = AttentionNeighborhood::from_graph(g);
  return layer_forward(heads, nb, h_in, slope, 0.0, nullptr).output;
}

GatOutput gat_forward(const GatParams& params, const Graph& g, const FeatureMatrix& h0, Mode mode,
                      std::uint64_t seed) {
  if (params.layer1.empty()) throw Error(ErrorKind::InvalidParams, "GAT has no layer-1 heads");
  if (h0.rows() != g.node_count()) {
    throw Error(ErrorKind::DimensionMismatch, "gat_forward: H(0) rows != node count");
  }
  if (params.wlin.rows() != params.layer2.w.cols() || params.wlin.cols() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "gat_forward: Wlin must be output x 1");
  }
  Rng rng(seed);
  Rng* dropout_rng = mode == Mode::Train ? &rng : nullptr;
  GatOutput out;
  auto& a = out.acts;
  a.neighborhood = AttentionNeighborhood::from_graph(g);
  a.layers[0] = layer_forward(params.layer1, a.neighborhood, h0, params.leaky_slope,
                              params.dropout, dropout_rng);
  a.layers[1] = layer_forward(std::span<const GatHead>(&params.layer2, 1), a.neighborhood,
                              a.layers[0].output, params.leaky_slope, params.dropout, dropout_rng);
  a.z = nn::mean_rows(a.layers[1].output);
  double y = params.b;
  for (std::size_t c = 0; c < a.z.size(); ++c) y += a.z[c] * params.wlin(c, 0);
  a.yhat = y;
  out.yhat = y;
  return out;
}

GatGradients gat_backward(const GatParams& params, const GatActivations& acts, double dl_dyhat) {
  const GatConfig c = params.config();
  const std::size_t n = acts.neighborhood.node_count();
  const bool consistent =
      n > 0 && acts.layers[0].heads.size() == c.heads && acts.layers[1].heads.size() == 1 &&
      acts.layers[0].input.cols() == c.input_dim &&
      acts.layers[0].pre_activation.cols() == c.heads * c.hidden &&
      acts.layers[1].pre_activation.cols() == c.output && acts.z.size() == c.output &&
      acts.layers[1].output.rows() == n;
  if (!consistent) {
    throw Error(ErrorKind::StaleActivation, "gat_backward: activations do not match parameters");
  }

  GatGradients g = GatTensors::zeros(c);
  g.b = dl_dyhat;
  for (std::size_t i = 0; i < c.output; ++i) g.wlin(i, 0) = dl_dyhat * acts.z[i];

  DenseMatrix d_h(n, c.output);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < c.output; ++j) d_h(r, j) = dl_dyhat * params.wlin(j, 0) * inv_n;
  }
  const DenseMatrix d_h1 = layer_backward(std::span<const GatHead>(&params.layer2, 1),
                                          std::span<GatHead>(&g.layer2, 1), acts.layers[1],
                                          acts.neighborhood, d_h, params.leaky_slope, true);
  layer_backward(params.layer1, g.layer1, acts.layers[0], acts.neighborhood, d_h1,
                 params.leaky_slope, false);
  return g;
}

GatBatchResult gat_batch_step(const GatParams& params, std::span<const LabeledGraph> batch,
                              const nn::LossKind& kind, Mode mode, std::uint64_t seed) {
  if (batch.empty()) throw Error(ErrorKind::InvalidInput, "gat_batch_step: empty batch");
  struct Acc {
    GatGradients grads;
    double loss = 0.0;
    Acc& operator+=(const Acc& o) {
      grads += o.grads;
      loss += o.loss;
      return *this;
    }
  };
  std::vector<double> predictions(batch.size());
  const Acc zero{GatTensors::zeros(params.config()), 0.0};
  Acc total = ordered_block_reduce(batch.size(), kBlockSize, zero, [&](std::size_t i, Acc& acc) {
    const auto& item = batch[i];
    const auto out = gat_forward(params, item.graph, item.features, mode, mix_seed(seed, i));
    predictions[i] = out.yhat;
    acc.loss += nn::loss_term(out.yhat, item.target, kind);
    const double d = nn::loss_grad_term(out.yhat, item.target, batch.size(), kind);
    acc.grads += gat_backward(params, out.acts, d);
  });
  return {total.loss / static_cast<double>(batch.size()), std::move(total.grads),
          std::move(predictions)};
}

double gat_predict(const GatParams& params, const LabeledGraph& item) {
  return gat_forward(params, item.graph, item.features, Mode::Eval).yhat;
}

}  // namespace netloc
