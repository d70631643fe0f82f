#include "wakegnn/gnn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wakegnn/nncore/activation.hpp"

namespace wakegnn::gnn {

namespace {

template <typename T>
void check_rows(const Tensor2<T>& h, const NeighborLists& nbrs, const char* where) {
  if (static_cast<std::size_t>(h.rows()) != n_vertices(nbrs)) {
    throw DimensionError(std::string(where) + ": " + std::to_string(h.rows()) + " feature rows for " +
                         std::to_string(n_vertices(nbrs)) + " vertices");
  }
}

template <typename T>
void apply_activation(Tensor2<T>& z, Activation act) {
  if (act == Activation::Relu) z = z.cwiseMax(T(0));
}

template <typename T>
void activation_backward(const Tensor2<T>& pre, Tensor2<T>& grad, Activation act) {
  if (act == Activation::Relu) nn::relu_backward_inplace(pre, grad);
}

template <typename T>
T leaky(T x) {
  return x > T(0) ? x : static_cast<T>(kGatNegativeSlope) * x;
}

}  // namespace

template <typename T>
Tensor2<T> mean_aggregate(const Tensor2<T>& h, const NeighborLists& nbrs) {
  check_rows(h, nbrs, "mean_aggregate");
  const Eigen::Index c = h.cols();
  Tensor2<T> agg = Tensor2<T>::Zero(h.rows(), c);
  for (std::size_t v = 0; v < n_vertices(nbrs); ++v) {
    const auto begin = nbrs.offsets[v];
    const auto end = nbrs.offsets[v + 1];
    if (begin == end) continue;
    auto row = agg.row(static_cast<Eigen::Index>(v));
    for (auto e = begin; e < end; ++e) row += h.row(nbrs.indices[e]);
    row *= T(1) / static_cast<T>(end - begin);
  }
  return agg;
}

template <typename T>
void mean_aggregate_backward(const Tensor2<T>& grad_agg, const NeighborLists& nbrs, Tensor2<T>& grad_h) {
  check_rows(grad_agg, nbrs, "mean_aggregate_backward");
  nn::require_same_shape(grad_agg, grad_h, "mean_aggregate_backward");
  for (std::size_t v = 0; v < n_vertices(nbrs); ++v) {
    const auto begin = nbrs.offsets[v];
    const auto end = nbrs.offsets[v + 1];
    if (begin == end) continue;
    const T inv = T(1) / static_cast<T>(end - begin);
    const auto g = grad_agg.row(static_cast<Eigen::Index>(v));
    for (auto e = begin; e < end; ++e) grad_h.row(nbrs.indices[e]) += inv * g;
  }
}

// --- GraphSAGE --------------------------------------------------------------

template <typename T>
Tensor2<T> sage_layer_forward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                              Activation act, SageCache<T>* cache) {
  check_rows(h, nbrs, "sage_layer_forward");
  const Eigen::Index in = h.cols();
  if (p.weight.rows() != 2 * in) {
    throw DimensionError("sage_layer_forward: weight has " + std::to_string(p.weight.rows()) + " rows, expected " +
                         std::to_string(2 * in));
  }
  Tensor2<T> agg = mean_aggregate(h, nbrs);
  Tensor2<T> z(h.rows(), p.weight.cols());
  z.noalias() = h * p.weight.topRows(in);
  z.noalias() += agg * p.weight.bottomRows(in);
  z.rowwise() += p.bias.row(0);
  if (cache) {
    cache->aggregate = std::move(agg);
    cache->pre_activation = z;
  }
  apply_activation(z, act);
  return z;
}

template <typename T>
Tensor2<T> sage_layer_backward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                               const SageCache<T>& cache, Tensor2<T> grad_out, LinearParams<T>& grad_p,
                               Activation act, bool want_input) {
  const Eigen::Index in = h.cols();
  activation_backward(cache.pre_activation, grad_out, act);
  grad_p.weight.topRows(in).noalias() += h.transpose() * grad_out;
  grad_p.weight.bottomRows(in).noalias() += cache.aggregate.transpose() * grad_out;
  grad_p.bias += grad_out.colwise().sum();
  if (!want_input) return {};
  Tensor2<T> grad_h(h.rows(), in);
  grad_h.noalias() = grad_out * p.weight.topRows(in).transpose();
  Tensor2<T> grad_agg(h.rows(), in);
  grad_agg.noalias() = grad_out * p.weight.bottomRows(in).transpose();
  mean_aggregate_backward(grad_agg, nbrs, grad_h);
  return grad_h;
}

template <typename T>
Tensor2<T> sage_res_layer_forward(const Tensor2<T>& h, const Tensor2<T>& h0, const NeighborLists& nbrs,
                                  const LinearParams<T>& p, T alpha, T beta, SageCache<T>* cache) {
  nn::require_same_shape(h, h0, "sage_res_layer_forward h0");
  Tensor2<T> out = sage_layer_forward(h, nbrs, p, Activation::Relu, cache);
  if (out.cols() != h.cols()) {
    throw DimensionError("sage_res_layer_forward: residual needs equal input and output widths");
  }
  out += alpha * h0 + beta * h;
  return out;
}

template <typename T>
ResidualInputGrads<T> sage_res_layer_backward(const Tensor2<T>& h, const NeighborLists& nbrs,
                                              const LinearParams<T>& p, T alpha, T beta, const SageCache<T>& cache,
                                              const Tensor2<T>& grad_out, LinearParams<T>& grad_p) {
  ResidualInputGrads<T> g;
  g.h = sage_layer_backward(h, nbrs, p, cache, grad_out, grad_p, Activation::Relu, true);
  g.h += beta * grad_out;
  g.h0 = alpha * grad_out;
  return g;
}

// --- GCN --------------------------------------------------------------------

namespace {

std::vector<double> gcn_inv_sqrt_degree(const NeighborLists& nbrs) {
  const std::size_t n = n_vertices(nbrs);
  std::vector<double> s(n);
  for (std::size_t v = 0; v < n; ++v) {
    s[v] = 1.0 / std::sqrt(static_cast<double>(nbrs.offsets[v + 1] - nbrs.offsets[v] + 1));
  }
  return s;
}

}  // namespace

template <typename T>
Tensor2<T> gcn_layer_forward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                             Activation act, GcnCache<T>* cache) {
  check_rows(h, nbrs, "gcn_layer_forward");
  Tensor2<T> xw = nn::linear_forward(h, LinearParams<T>{p.weight, Tensor2<T>::Zero(1, p.weight.cols())});
  const auto s = gcn_inv_sqrt_degree(nbrs);
  Tensor2<T> z(h.rows(), p.weight.cols());
  for (std::size_t v = 0; v < n_vertices(nbrs); ++v) {
    const auto vi = static_cast<Eigen::Index>(v);
    auto row = z.row(vi);
    row = static_cast<T>(s[v] * s[v]) * xw.row(vi);
    for (auto e = nbrs.offsets[v]; e < nbrs.offsets[v + 1]; ++e) {
      const auto u = nbrs.indices[e];
      row += static_cast<T>(s[v] * s[u]) * xw.row(u);
    }
    row += p.bias.row(0);
  }
  if (cache) {
    cache->transformed = std::move(xw);
    cache->pre_activation = z;
  }
  apply_activation(z, act);
  return z;
}

template <typename T>
Tensor2<T> gcn_layer_backward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                              const GcnCache<T>& cache, Tensor2<T> grad_out, LinearParams<T>& grad_p,
                              Activation act, bool want_input) {
  activation_backward(cache.pre_activation, grad_out, act);
  grad_p.bias += grad_out.colwise().sum();
  const auto s = gcn_inv_sqrt_degree(nbrs);
  Tensor2<T> grad_xw = Tensor2<T>::Zero(h.rows(), p.weight.cols());
  for (std::size_t v = 0; v < n_vertices(nbrs); ++v) {
    const auto vi = static_cast<Eigen::Index>(v);
    const auto g = grad_out.row(vi);
    grad_xw.row(vi) += static_cast<T>(s[v] * s[v]) * g;
    for (auto e = nbrs.offsets[v]; e < nbrs.offsets[v + 1]; ++e) {
      const auto u = nbrs.indices[e];
      grad_xw.row(u) += static_cast<T>(s[v] * s[u]) * g;
    }
  }
  grad_p.weight.noalias() += h.transpose() * grad_xw;
  if (!want_input) return {};
  Tensor2<T> grad_h(h.rows(), h.cols());
  grad_h.noalias() = grad_xw * p.weight.transpose();
  return grad_h;
}

// --- GAT --------------------------------------------------------------------

template <typename T>
Tensor2<T> gat_layer_forward(const Tensor2<T>& h, const NeighborLists& nbrs, const LayerParams<T>& p, int heads,
                             Activation act, GatCache<T>* cache, bool include_self) {
  check_rows(h, nbrs, "gat_layer_forward");
  const Eigen::Index out = p.lin.weight.cols();
  if (heads < 1 || out % heads != 0) {
    throw DimensionError("gat_layer_forward: width " + std::to_string(out) + " not divisible by " +
                         std::to_string(heads) + " heads");
  }
  const Eigen::Index d = out / heads;
  nn::require_shape(p.att_src, heads, d, "gat att_src");
  nn::require_shape(p.att_dst, heads, d, "gat att_dst");

  Tensor2<T> xw(h.rows(), out);
  xw.noalias() = h * p.lin.weight;
  NeighborLists attn = include_self ? with_self_loops(nbrs) : nbrs;
  const std::size_t n = n_vertices(attn);
  const auto hs = static_cast<std::size_t>(heads);

  // Per-vertex source/destination scores for every head.
  Tensor2<T> src_score(h.rows(), heads);
  Tensor2<T> dst_score(h.rows(), heads);
  for (Eigen::Index hh = 0; hh < heads; ++hh) {
    src_score.col(hh).noalias() = xw.middleCols(hh * d, d) * p.att_src.row(hh).transpose();
    dst_score.col(hh).noalias() = xw.middleCols(hh * d, d) * p.att_dst.row(hh).transpose();
  }

  std::vector<T> scores(attn.indices.size() * hs);
  std::vector<T> alpha(attn.indices.size() * hs);
  Tensor2<T> z = Tensor2<T>::Zero(h.rows(), out);
  for (std::size_t v = 0; v < n; ++v) {
    const auto begin = attn.offsets[v];
    const auto end = attn.offsets[v + 1];
    if (begin == end) continue;
    for (std::size_t hh = 0; hh < hs; ++hh) {
      T max_logit = -std::numeric_limits<T>::infinity();
      for (auto e = begin; e < end; ++e) {
        const T raw = dst_score(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(hh)) +
                      src_score(attn.indices[e], static_cast<Eigen::Index>(hh));
        scores[e * hs + hh] = raw;
        max_logit = std::max(max_logit, leaky(raw));
      }
      T total = T(0);
      for (auto e = begin; e < end; ++e) {
        const T w = std::exp(leaky(scores[e * hs + hh]) - max_logit);
        alpha[e * hs + hh] = w;
        total += w;
      }
      const auto col0 = static_cast<Eigen::Index>(hh) * d;
      for (auto e = begin; e < end; ++e) {
        alpha[e * hs + hh] /= total;
        z.row(static_cast<Eigen::Index>(v)).segment(col0, d) +=
            alpha[e * hs + hh] * xw.row(attn.indices[e]).segment(col0, d);
      }
    }
  }
  z.rowwise() += p.lin.bias.row(0);
  if (cache) {
    cache->transformed = std::move(xw);
    cache->pre_activation = z;
    cache->attention_nbrs = std::move(attn);
    cache->scores = std::move(scores);
    cache->attention = std::move(alpha);
  }
  apply_activation(z, act);
  return z;
}

template <typename T>
Tensor2<T> gat_layer_backward(const Tensor2<T>& h, const LayerParams<T>& p, int heads, const GatCache<T>& cache,
                              Tensor2<T> grad_out, LayerParams<T>& grad_p, Activation act, bool want_input) {
  activation_backward(cache.pre_activation, grad_out, act);
  grad_p.lin.bias += grad_out.colwise().sum();
  const Eigen::Index out = p.lin.weight.cols();
  const Eigen::Index d = out / heads;
  const auto hs = static_cast<std::size_t>(heads);
  const auto& attn = cache.attention_nbrs;
  const auto& xw = cache.transformed;
  const std::size_t n = n_vertices(attn);

  Tensor2<T> grad_xw = Tensor2<T>::Zero(h.rows(), out);
  Tensor2<T> grad_src = Tensor2<T>::Zero(h.rows(), heads);
  Tensor2<T> grad_dst = Tensor2<T>::Zero(h.rows(), heads);
  std::vector<T> grad_alpha;
  for (std::size_t v = 0; v < n; ++v) {
    const auto begin = attn.offsets[v];
    const auto end = attn.offsets[v + 1];
    if (begin == end) continue;
    const auto vi = static_cast<Eigen::Index>(v);
    grad_alpha.resize(end - begin);
    for (std::size_t hh = 0; hh < hs; ++hh) {
      const auto col0 = static_cast<Eigen::Index>(hh) * d;
      const auto g = grad_out.row(vi).segment(col0, d);
      T weighted = T(0);
      for (auto e = begin; e < end; ++e) {
        const auto u = attn.indices[e];
        const T a = cache.attention[e * hs + hh];
        grad_xw.row(u).segment(col0, d) += a * g;
        const T ga = g.dot(xw.row(u).segment(col0, d));
        grad_alpha[e - begin] = ga;
        weighted += a * ga;
      }
      for (auto e = begin; e < end; ++e) {
        const T a = cache.attention[e * hs + hh];
        const T grad_logit = a * (grad_alpha[e - begin] - weighted);
        const T slope = cache.scores[e * hs + hh] > T(0) ? T(1) : static_cast<T>(kGatNegativeSlope);
        const T grad_raw = grad_logit * slope;
        grad_dst(vi, static_cast<Eigen::Index>(hh)) += grad_raw;
        grad_src(attn.indices[e], static_cast<Eigen::Index>(hh)) += grad_raw;
      }
    }
  }
  for (Eigen::Index hh = 0; hh < heads; ++hh) {
    const auto block = xw.middleCols(hh * d, d);
    grad_p.att_src.row(hh).noalias() += grad_src.col(hh).transpose() * block;
    grad_p.att_dst.row(hh).noalias() += grad_dst.col(hh).transpose() * block;
    grad_xw.middleCols(hh * d, d).noalias() += grad_src.col(hh) * p.att_src.row(hh);
    grad_xw.middleCols(hh * d, d).noalias() += grad_dst.col(hh) * p.att_dst.row(hh);
  }
  grad_p.lin.weight.noalias() += h.transpose() * grad_xw;
  if (!want_input) return {};
  Tensor2<T> grad_h(h.rows(), h.cols());
  grad_h.noalias() = grad_xw * p.lin.weight.transpose();
  return grad_h;
}

// --- Jumping knowledge ------------------------------------------------------

template <typename T>
Tensor2<T> jk_concat(const std::vector<Tensor2<T>>& outputs) {
  if (outputs.empty()) throw DimensionError("jk_concat: no layer outputs");
  Eigen::Index width = 0;
  for (const auto& o : outputs) {
    if (o.rows() != outputs.front().rows()) throw DimensionError("jk_concat: ragged layer outputs");
    width += o.cols();
  }
  Tensor2<T> cat(outputs.front().rows(), width);
  Eigen::Index col = 0;
  for (const auto& o : outputs) {
    cat.middleCols(col, o.cols()) = o;
    col += o.cols();
  }
  return cat;
}

template <typename T>
Tensor2<T> jk_aggregate(const std::vector<Tensor2<T>>& outputs, const LinearParams<T>& p) {
  if (outputs.empty()) throw DimensionError("jk_aggregate: no layer outputs");
  Eigen::Index width = 0;
  for (const auto& o : outputs) {
    if (o.rows() != outputs.front().rows()) throw DimensionError("jk_aggregate: ragged layer outputs");
    width += o.cols();
  }
  if (width != p.weight.rows()) {
    throw DimensionError("jk_aggregate: concatenated width " + std::to_string(width) + " != projection input " +
                         std::to_string(p.weight.rows()));
  }
  Tensor2<T> out(outputs.front().rows(), p.weight.cols());
  out.rowwise() = p.bias.row(0);
  Eigen::Index row0 = 0;
  for (const auto& o : outputs) {
    out.noalias() += o * p.weight.middleRows(row0, o.cols());
    row0 += o.cols();
  }
  return out;
}

template <typename T>
std::vector<Tensor2<T>> jk_aggregate_backward(const std::vector<Tensor2<T>>& outputs, const LinearParams<T>& p,
                                              const Tensor2<T>& grad_out, LinearParams<T>& grad_p) {
  std::vector<Tensor2<T>> grads;
  grads.reserve(outputs.size());
  grad_p.bias += grad_out.colwise().sum();
  Eigen::Index row0 = 0;
  for (const auto& o : outputs) {
    const auto w = p.weight.middleRows(row0, o.cols());
    grad_p.weight.middleRows(row0, o.cols()).noalias() += o.transpose() * grad_out;
    Tensor2<T> g(o.rows(), o.cols());
    g.noalias() = grad_out * w.transpose();
    grads.push_back(std::move(g));
    row0 += o.cols();
  }
  return grads;
}

#define WAKEGNN_INSTANTIATE_LAYERS(T)                                                                                \
  template Tensor2<T> mean_aggregate(const Tensor2<T>&, const NeighborLists&);                                     \
  template void mean_aggregate_backward(const Tensor2<T>&, const NeighborLists&, Tensor2<T>&);                     \
  template Tensor2<T> sage_layer_forward(const Tensor2<T>&, const NeighborLists&, const LinearParams<T>&,          \
                                         Activation, SageCache<T>*);                                               \
  template Tensor2<T> sage_layer_backward(const Tensor2<T>&, const NeighborLists&, const LinearParams<T>&,         \
                                          const SageCache<T>&, Tensor2<T>, LinearParams<T>&, Activation, bool);    \
  template Tensor2<T> sage_res_layer_forward(const Tensor2<T>&, const Tensor2<T>&, const NeighborLists&,           \
                                             const LinearParams<T>&, T, T, SageCache<T>*);                         \
  template ResidualInputGrads<T> sage_res_layer_backward(const Tensor2<T>&, const NeighborLists&,                 \
                                                         const LinearParams<T>&, T, T, const SageCache<T>&,       \
                                                         const Tensor2<T>&, LinearParams<T>&);                     \
  template Tensor2<T> gcn_layer_forward(const Tensor2<T>&, const NeighborLists&, const LinearParams<T>&,           \
                                        Activation, GcnCache<T>*);                                                 \
  template Tensor2<T> gcn_layer_backward(const Tensor2<T>&, const NeighborLists&, const LinearParams<T>&,          \
                                         const GcnCache<T>&, Tensor2<T>, LinearParams<T>&, Activation, bool);      \
  template Tensor2<T> gat_layer_forward(const Tensor2<T>&, const NeighborLists&, const LayerParams<T>&, int,        \
                                        Activation, GatCache<T>*, bool);                                           \
  template Tensor2<T> gat_layer_backward(const Tensor2<T>&, const LayerParams<T>&, int, const GatCache<T>&,        \
                                         Tensor2<T>, LayerParams<T>&, Activation, bool);                           \
  template Tensor2<T> jk_concat(const std::vector<Tensor2<T>>&);                                                   \
  template Tensor2<T> jk_aggregate(const std::vector<Tensor2<T>>&, const LinearParams<T>&);                        \
  template std::vector<Tensor2<T>> jk_aggregate_backward(const std::vector<Tensor2<T>>&, const LinearParams<T>&,   \
                                                         const Tensor2<T>&, LinearParams<T>&);

WAKEGNN_INSTANTIATE_LAYERS(float)
WAKEGNN_INSTANTIATE_LAYERS(double)

}  // namespace wakegnn::gnn
