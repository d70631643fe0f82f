#pragma once

#include <vector>

#include "wakegnn/gnn/neighbors.hpp"
#include "wakegnn/nncore/linear.hpp"

namespace wakegnn::gnn {

using nn::LinearParams;
using nn::Tensor2;

enum class Activation { Relu, None };

/// Parameters of one message-passing layer. `att_src`/`att_dst` (heads x head
/// width) are only populated for attention layers.
template <typename T>
struct LayerParams {
  LinearParams<T> lin;
  Tensor2<T> att_src;
  Tensor2<T> att_dst;
};

// ---------------------------------------------------------------------------
// Mean aggregation

/// Row v = mean of h over nbrs(v); zero row for an empty list.
template <typename T>
Tensor2<T> mean_aggregate(const Tensor2<T>& h, const NeighborLists& nbrs);

/// Adds the transpose of mean_aggregate applied to grad_agg into grad_h.
template <typename T>
void mean_aggregate_backward(const Tensor2<T>& grad_agg, const NeighborLists& nbrs, Tensor2<T>& grad_h);

// ---------------------------------------------------------------------------
// GraphSAGE (mean): out_v = act([h_v ++ mean_{u in N(v)} h_u] W + b), W is 2*in x out.

template <typename T>
struct SageCache {
  Tensor2<T> aggregate;
  Tensor2<T> pre_activation;
};

template <typename T>
Tensor2<T> sage_layer_forward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                              Activation act = Activation::Relu, SageCache<T>* cache = nullptr);

/// Accumulates parameter gradients into `grad_p`; returns dL/dh (empty if !want_input).
template <typename T>
Tensor2<T> sage_layer_backward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                               const SageCache<T>& cache, Tensor2<T> grad_out, LinearParams<T>& grad_p,
                               Activation act = Activation::Relu, bool want_input = true);

/// SAGE term plus initial and layer-wise residuals: SAGE(h) + alpha h0 + beta h.
template <typename T>
Tensor2<T> sage_res_layer_forward(const Tensor2<T>& h, const Tensor2<T>& h0, const NeighborLists& nbrs,
                                  const LinearParams<T>& p, T alpha, T beta, SageCache<T>* cache = nullptr);

template <typename T>
struct ResidualInputGrads {
  Tensor2<T> h;
  Tensor2<T> h0;
};

template <typename T>
ResidualInputGrads<T> sage_res_layer_backward(const Tensor2<T>& h, const NeighborLists& nbrs,
                                              const LinearParams<T>& p, T alpha, T beta, const SageCache<T>& cache,
                                              const Tensor2<T>& grad_out, LinearParams<T>& grad_p);

// ---------------------------------------------------------------------------
// GCN with self-loops: out_v = act(sum_{u in N(v) + v} (h_u W) / sqrt(d_u d_v) + b),
// degrees counted including the self-loop.

template <typename T>
struct GcnCache {
  Tensor2<T> transformed;
  Tensor2<T> pre_activation;
};

template <typename T>
Tensor2<T> gcn_layer_forward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                             Activation act = Activation::Relu, GcnCache<T>* cache = nullptr);

template <typename T>
Tensor2<T> gcn_layer_backward(const Tensor2<T>& h, const NeighborLists& nbrs, const LinearParams<T>& p,
                              const GcnCache<T>& cache, Tensor2<T> grad_out, LinearParams<T>& grad_p,
                              Activation act = Activation::Relu, bool want_input = true);

// ---------------------------------------------------------------------------
// GAT: per head, e_vu = LeakyReLU_0.2(a_dst . W h_v + a_src . W h_u), softmax over
// the attention neighbourhood of v (N(v) plus v when include_self), heads concatenated.

inline constexpr double kGatNegativeSlope = 0.2;

template <typename T>
struct GatCache {
  Tensor2<T> transformed;
  Tensor2<T> pre_activation;
  NeighborLists attention_nbrs;
  std::vector<T> scores;     // raw logits before LeakyReLU, [slot * heads + head]
  std::vector<T> attention;  // softmax weights, same layout
};

template <typename T>
Tensor2<T> gat_layer_forward(const Tensor2<T>& h, const NeighborLists& nbrs, const LayerParams<T>& p, int heads,
                             Activation act = Activation::Relu, GatCache<T>* cache = nullptr,
                             bool include_self = true);

template <typename T>
Tensor2<T> gat_layer_backward(const Tensor2<T>& h, const LayerParams<T>& p, int heads, const GatCache<T>& cache,
                              Tensor2<T> grad_out, LayerParams<T>& grad_p, Activation act = Activation::Relu,
                              bool want_input = true);

// ---------------------------------------------------------------------------
// Jumping knowledge (concatenation)

/// Column-wise concatenation of the layer outputs. Throws on ragged row counts.
template <typename T>
Tensor2<T> jk_concat(const std::vector<Tensor2<T>>& outputs);

/// Linear projection of the concatenated layer outputs. Evaluated block-wise so
/// the concatenation is never materialised.
template <typename T>
Tensor2<T> jk_aggregate(const std::vector<Tensor2<T>>& outputs, const LinearParams<T>& p);

/// Accumulates dW, db into grad_p and returns dL/d(output_k) for each k.
template <typename T>
std::vector<Tensor2<T>> jk_aggregate_backward(const std::vector<Tensor2<T>>& outputs, const LinearParams<T>& p,
                                              const Tensor2<T>& grad_out, LinearParams<T>& grad_p);

}  // namespace wakegnn::gnn
