#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wakegnn/gnn/config.hpp"
#include "wakegnn/gnn/layers.hpp"
#include "wakegnn/nncore/adamw.hpp"
#include "wakegnn/nncore/checkpoint.hpp"

namespace wakegnn::gnn {

/// Message-passing stack plus output head.
///
/// sage_jk_res: layer 1 is a plain SAGE layer projecting the input features,
/// layers 2..K add `alpha * h1 + beta * h_{k-1}`; the K outputs are concatenated,
/// projected back to `hidden` (jk) and passed through ReLU into the head.
/// Other variants feed the last layer output straight into the head.
template <typename T>
struct GnnModel {
  ModelConfig config;
  std::vector<LayerParams<T>> layers;
  LinearParams<T> jk;  // sage_jk_res only
  LinearParams<T> head;
};

template <typename T>
GnnModel<T> init_model(const ModelConfig& config, std::uint64_t seed);

/// Same structure, every tensor zero. Used as a gradient accumulator.
template <typename T>
GnnModel<T> zeros_like(const GnnModel<T>& m);

template <typename T, typename U>
GnnModel<U> cast_model(const GnnModel<T>& m);

/// Visits every parameter tensor in declaration order as f(name, tensor).
template <typename Model, typename F>
void for_each_param(Model& m, F&& f) {
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    auto& layer = m.layers[i];
    const std::string prefix = "layers." + std::to_string(i) + ".";
    f(prefix + "weight", layer.lin.weight);
    f(prefix + "bias", layer.lin.bias);
    if (layer.att_src.size() > 0) {
      f(prefix + "att_src", layer.att_src);
      f(prefix + "att_dst", layer.att_dst);
    }
  }
  if (m.jk.weight.size() > 0) {
    f(std::string("jk.weight"), m.jk.weight);
    f(std::string("jk.bias"), m.jk.bias);
  }
  f(std::string("head.weight"), m.head.weight);
  f(std::string("head.bias"), m.head.bias);
}

template <typename T>
std::size_t count_params(const GnnModel<T>& m) {
  std::size_t total = 0;
  for_each_param(m, [&](const std::string&, const Tensor2<T>& t) { total += static_cast<std::size_t>(t.size()); });
  return total;
}

/// Pairs each parameter with the matching gradient tensor for the optimizer.
template <typename T>
std::vector<nn::ParamSlot<T>> param_slots(GnnModel<T>& model, const GnnModel<T>& grads);

/// Activations kept by model_forward for model_backward. One per invocation.
template <typename T>
struct ForwardCache {
  Tensor2<T> input;
  std::vector<Tensor2<T>> outputs;  // per-layer outputs h_1..h_K
  std::vector<SageCache<T>> sage;
  std::vector<GcnCache<T>> gcn;
  std::vector<GatCache<T>> gat;
  Tensor2<T> jk_pre;      // jk projection before ReLU
  Tensor2<T> head_input;  // final vertex embeddings
};

/// `nbrs` holds either one list set shared by every layer or one per layer.
template <typename T>
Tensor2<T> model_forward(const GnnModel<T>& model, std::span<const NeighborLists> nbrs, const Tensor2<T>& features,
                         ForwardCache<T>* cache = nullptr);

/// Adds dL/dparam for every parameter into `grads` (shaped like the model).
template <typename T>
void model_backward(const GnnModel<T>& model, std::span<const NeighborLists> nbrs, const ForwardCache<T>& cache,
                    const Tensor2<T>& grad_out, GnnModel<T>& grads);

/// Parameters (and optimizer moments, when given) as a CKP1 checkpoint whose
/// metadata holds `extra` plus the model config under "model".
template <typename T>
nn::Checkpoint to_checkpoint(const GnnModel<T>& model, const nn::AdamWState<T>* optimizer,
                             nlohmann::json extra = nlohmann::json::object());

template <typename T>
GnnModel<T> model_from_checkpoint(const nn::Checkpoint& ckp);

template <typename T>
nn::AdamWState<T> optimizer_from_checkpoint(const nn::Checkpoint& ckp, const nn::AdamWHyper& hyper);

}  // namespace wakegnn::gnn
