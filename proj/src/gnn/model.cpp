#include "wakegnn/gnn/model.hpp"

#include "wakegnn/nncore/activation.hpp"

namespace wakegnn::gnn {

namespace {

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  // splitmix64 step so neighbouring blocks get unrelated streams.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (block + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

const NeighborLists& layer_nbrs(std::span<const NeighborLists> nbrs, std::size_t layer) {
  return nbrs.size() == 1 ? nbrs[0] : nbrs[layer];
}

void check_nbrs(std::span<const NeighborLists> nbrs, const ModelConfig& c) {
  if (nbrs.size() != 1 && nbrs.size() != static_cast<std::size_t>(c.n_layers)) {
    throw DimensionError("model: expected 1 or " + std::to_string(c.n_layers) + " neighbour list sets, got " +
                         std::to_string(nbrs.size()));
  }
}

}  // namespace

template <typename T>
GnnModel<T> init_model(const ModelConfig& config, std::uint64_t seed) {
  validate(config);
  GnnModel<T> m;
  m.config = config;
  const Eigen::Index hidden = config.hidden;
  std::uint64_t block = 0;
  for (int k = 0; k < config.n_layers; ++k) {
    const Eigen::Index in = k == 0 ? config.in_channels : hidden;
    LayerParams<T> layer;
    switch (config.variant) {
      case Variant::Sage:
      case Variant::SageJkRes:
        layer.lin = nn::init_params<T>(2 * in, hidden, block_seed(seed, block++));
        break;
      case Variant::Gcn:
        layer.lin = nn::init_params<T>(in, hidden, block_seed(seed, block++));
        break;
      case Variant::Gat: {
        layer.lin = nn::init_params<T>(in, hidden, block_seed(seed, block++));
        const Eigen::Index d = hidden / config.gat_heads;
        layer.att_src = nn::init_params<T>(config.gat_heads, d, block_seed(seed, block++)).weight;
        layer.att_dst = nn::init_params<T>(config.gat_heads, d, block_seed(seed, block++)).weight;
        break;
      }
    }
    m.layers.push_back(std::move(layer));
  }
  if (config.variant == Variant::SageJkRes) {
    m.jk = nn::init_params<T>(config.n_layers * hidden, hidden, block_seed(seed, block++));
  }
  m.head = nn::init_params<T>(hidden, config.out_channels, block_seed(seed, block++));
  return m;
}

template <typename T>
GnnModel<T> zeros_like(const GnnModel<T>& m) {
  GnnModel<T> z = m;
  for_each_param(z, [](const std::string&, Tensor2<T>& t) { t.setZero(); });
  return z;
}

template <typename T, typename U>
GnnModel<U> cast_model(const GnnModel<T>& m) {
  GnnModel<U> out;
  out.config = m.config;
  auto cast_lin = [](const LinearParams<T>& p) {
    return LinearParams<U>{p.weight.template cast<U>(), p.bias.template cast<U>()};
  };
  for (const auto& layer : m.layers) {
    out.layers.push_back({cast_lin(layer.lin), layer.att_src.template cast<U>(), layer.att_dst.template cast<U>()});
  }
  out.jk = cast_lin(m.jk);
  out.head = cast_lin(m.head);
  return out;
}

template <typename T>
std::vector<nn::ParamSlot<T>> param_slots(GnnModel<T>& model, const GnnModel<T>& grads) {
  std::vector<nn::ParamSlot<T>> slots;
  for_each_param(model, [&](const std::string& name, Tensor2<T>& t) { slots.push_back({name, &t, nullptr}); });
  std::size_t i = 0;
  for_each_param(grads, [&](const std::string& name, const Tensor2<T>& t) {
    if (i >= slots.size() || slots[i].name != name) {
      throw DimensionError("param_slots: gradient structure does not match the model");
    }
    slots[i++].grad = &t;
  });
  if (i != slots.size()) throw DimensionError("param_slots: gradient structure does not match the model");
  return slots;
}

template <typename T>
Tensor2<T> model_forward(const GnnModel<T>& model, std::span<const NeighborLists> nbrs, const Tensor2<T>& features,
                         ForwardCache<T>* cache) {
  const auto& c = model.config;
  check_nbrs(nbrs, c);
  if (features.cols() != c.in_channels) {
    throw DimensionError("model_forward: features have " + std::to_string(features.cols()) +
                         " columns, model expects " + std::to_string(c.in_channels));
  }
  if (static_cast<std::size_t>(features.rows()) != n_vertices(nbrs[0])) {
    throw DimensionError("model_forward: feature rows do not match the graph");
  }
  const auto K = static_cast<std::size_t>(c.n_layers);
  if (cache) {
    cache->input = features;
    cache->outputs.assign(K, {});
    cache->sage.assign(c.variant == Variant::Sage || c.variant == Variant::SageJkRes ? K : 0, {});
    cache->gcn.assign(c.variant == Variant::Gcn ? K : 0, {});
    cache->gat.assign(c.variant == Variant::Gat ? K : 0, {});
  }
  const T alpha = static_cast<T>(c.alpha);
  const T beta = static_cast<T>(c.beta);

  Tensor2<T> first;     // h_1 (residual source)
  Tensor2<T> prev;      // h_{k-1}
  Tensor2<T> jk_accum;  // running jk projection (no-cache path)
  const Eigen::Index hidden = c.hidden;

  for (std::size_t k = 0; k < K; ++k) {
    const Tensor2<T>& in = k == 0 ? features : prev;
    const auto& nb = layer_nbrs(nbrs, k);
    const auto& layer = model.layers[k];
    Tensor2<T> out;
    switch (c.variant) {
      case Variant::Sage:
        out = sage_layer_forward(in, nb, layer.lin, Activation::Relu, cache ? &cache->sage[k] : nullptr);
        break;
      case Variant::SageJkRes:
        out = k == 0 ? sage_layer_forward(in, nb, layer.lin, Activation::Relu, cache ? &cache->sage[k] : nullptr)
                     : sage_res_layer_forward(in, first, nb, layer.lin, alpha, beta,
                                              cache ? &cache->sage[k] : nullptr);
        break;
      case Variant::Gcn:
        out = gcn_layer_forward(in, nb, layer.lin, Activation::Relu, cache ? &cache->gcn[k] : nullptr);
        break;
      case Variant::Gat:
        out = gat_layer_forward(in, nb, layer, c.gat_heads, Activation::Relu, cache ? &cache->gat[k] : nullptr);
        break;
    }
    if (c.variant == Variant::SageJkRes) {
      if (!cache) {
        const auto w = model.jk.weight.middleRows(static_cast<Eigen::Index>(k) * hidden, hidden);
        if (k == 0) {
          jk_accum.resize(out.rows(), model.jk.weight.cols());
          jk_accum.rowwise() = model.jk.bias.row(0);
        }
        jk_accum.noalias() += out * w;
      }
      if (k == 0) first = out;
    }
    if (cache) cache->outputs[k] = out;
    prev = std::move(out);
  }

  Tensor2<T> head_input;
  if (c.variant == Variant::SageJkRes) {
    Tensor2<T> jk_pre = cache ? jk_aggregate(cache->outputs, model.jk) : std::move(jk_accum);
    head_input = jk_pre.cwiseMax(T(0));
    if (cache) cache->jk_pre = std::move(jk_pre);
  } else {
    head_input = std::move(prev);
  }
  Tensor2<T> result = nn::linear_forward(head_input, model.head);
  if (cache) cache->head_input = std::move(head_input);
  return result;
}

template <typename T>
void model_backward(const GnnModel<T>& model, std::span<const NeighborLists> nbrs, const ForwardCache<T>& cache,
                    const Tensor2<T>& grad_out, GnnModel<T>& grads) {
  const auto& c = model.config;
  check_nbrs(nbrs, c);
  nn::require_shape(grad_out, cache.head_input.rows(), c.out_channels, "model_backward grad_out");
  const auto K = static_cast<std::size_t>(c.n_layers);

  auto head_g = nn::linear_backward(cache.head_input, model.head, grad_out, true);
  grads.head.weight += head_g.weight;
  grads.head.bias += head_g.bias;

  auto input_of = [&](std::size_t k) -> const Tensor2<T>& { return k == 0 ? cache.input : cache.outputs[k - 1]; };

  if (c.variant == Variant::SageJkRes) {
    Tensor2<T> g_jk = nn::relu_backward(cache.jk_pre, head_g.input);
    std::vector<Tensor2<T>> g = jk_aggregate_backward(cache.outputs, model.jk, g_jk, grads.jk);
    const T alpha = static_cast<T>(c.alpha);
    const T beta = static_cast<T>(c.beta);
    for (std::size_t k = K; k-- > 1;) {
      auto r = sage_res_layer_backward(input_of(k), layer_nbrs(nbrs, k), model.layers[k].lin, alpha, beta,
                                       cache.sage[k], g[k], grads.layers[k].lin);
      g[k - 1] += r.h;
      g[0] += r.h0;
    }
    sage_layer_backward(cache.input, layer_nbrs(nbrs, 0), model.layers[0].lin, cache.sage[0], std::move(g[0]),
                        grads.layers[0].lin, Activation::Relu, false);
    return;
  }

  Tensor2<T> g = std::move(head_g.input);
  for (std::size_t k = K; k-- > 0;) {
    const bool want_input = k > 0;
    const auto& nb = layer_nbrs(nbrs, k);
    switch (c.variant) {
      case Variant::Sage:
        g = sage_layer_backward(input_of(k), nb, model.layers[k].lin, cache.sage[k], std::move(g),
                                grads.layers[k].lin, Activation::Relu, want_input);
        break;
      case Variant::Gcn:
        g = gcn_layer_backward(input_of(k), nb, model.layers[k].lin, cache.gcn[k], std::move(g), grads.layers[k].lin,
                               Activation::Relu, want_input);
        break;
      case Variant::Gat:
        g = gat_layer_backward(input_of(k), model.layers[k], c.gat_heads, cache.gat[k], std::move(g),
                               grads.layers[k], Activation::Relu, want_input);
        break;
      case Variant::SageJkRes:
        break;
    }
  }
}

namespace {

template <typename T>
nn::Blob to_blob(const std::string& name, const Tensor2<T>& t) {
  nn::Blob b{name, t.rows(), t.cols(), std::vector<double>(static_cast<std::size_t>(t.size()))};
  for (Eigen::Index i = 0; i < t.size(); ++i) b.data[static_cast<std::size_t>(i)] = static_cast<double>(t.data()[i]);
  return b;
}

template <typename T>
void from_blob(const nn::Blob& b, const std::string& name, Tensor2<T>& t) {
  if (b.name != name || b.rows != t.rows() || b.cols != t.cols()) {
    throw FormatError(FormatErrorKind::Malformed, "parameters:" + name,
                      "checkpoint blob '" + b.name + "' does not match model parameter '" + name + "'");
  }
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = static_cast<T>(b.data[static_cast<std::size_t>(i)]);
}

}  // namespace

template <typename T>
nn::Checkpoint to_checkpoint(const GnnModel<T>& model, const nn::AdamWState<T>* optimizer, nlohmann::json extra) {
  nn::Checkpoint ckp;
  ckp.metadata = std::move(extra);
  ckp.metadata["model"] = model.config;
  for_each_param(model, [&](const std::string& name, const Tensor2<T>& t) { ckp.parameters.push_back(to_blob(name, t)); });
  if (optimizer && !optimizer->first_moment.empty()) {
    ckp.optimizer_step = optimizer->step;
    for (std::size_t i = 0; i < ckp.parameters.size(); ++i) {
      ckp.first_moments.push_back(to_blob(ckp.parameters[i].name, optimizer->first_moment.at(i)));
      ckp.second_moments.push_back(to_blob(ckp.parameters[i].name, optimizer->second_moment.at(i)));
    }
  }
  return ckp;
}

template <typename T>
GnnModel<T> model_from_checkpoint(const nn::Checkpoint& ckp) {
  if (!ckp.metadata.contains("model")) {
    throw FormatError(FormatErrorKind::Malformed, "header", "checkpoint has no model config");
  }
  ModelConfig config;
  try {
    config = ckp.metadata.at("model").get<ModelConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::Malformed, "header", std::string("bad model config: ") + e.what());
  }
  GnnModel<T> model = init_model<T>(config, 0);
  std::size_t i = 0;
  for_each_param(model, [&](const std::string& name, Tensor2<T>& t) {
    if (i >= ckp.parameters.size()) {
      throw FormatError(FormatErrorKind::Malformed, "parameters", "checkpoint is missing parameter '" + name + "'");
    }
    from_blob(ckp.parameters[i++], name, t);
  });
  if (i != ckp.parameters.size()) {
    throw FormatError(FormatErrorKind::Malformed, "parameters", "checkpoint has extra parameter blobs");
  }
  return model;
}

template <typename T>
nn::AdamWState<T> optimizer_from_checkpoint(const nn::Checkpoint& ckp, const nn::AdamWHyper& hyper) {
  nn::AdamWState<T> state;
  state.hyper = hyper;
  state.step = ckp.optimizer_step;
  auto load = [](const nn::Blob& b) {
    Tensor2<T> t(b.rows, b.cols);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = static_cast<T>(b.data[static_cast<std::size_t>(i)]);
    return t;
  };
  for (const auto& b : ckp.first_moments) state.first_moment.push_back(load(b));
  for (const auto& b : ckp.second_moments) state.second_moment.push_back(load(b));
  return state;
}

#define WAKEGNN_INSTANTIATE_MODEL(T)                                                                               \
  template GnnModel<T> init_model<T>(const ModelConfig&, std::uint64_t);                                          \
  template GnnModel<T> zeros_like(const GnnModel<T>&);                                                             \
  template std::vector<nn::ParamSlot<T>> param_slots(GnnModel<T>&, const GnnModel<T>&);                           \
  template Tensor2<T> model_forward(const GnnModel<T>&, std::span<const NeighborLists>, const Tensor2<T>&,         \
                                    ForwardCache<T>*);                                                             \
  template void model_backward(const GnnModel<T>&, std::span<const NeighborLists>, const ForwardCache<T>&,         \
                               const Tensor2<T>&, GnnModel<T>&);                                                   \
  template nn::Checkpoint to_checkpoint(const GnnModel<T>&, const nn::AdamWState<T>*, nlohmann::json);             \
  template GnnModel<T> model_from_checkpoint<T>(const nn::Checkpoint&);                                            \
  template nn::AdamWState<T> optimizer_from_checkpoint<T>(const nn::Checkpoint&, const nn::AdamWHyper&);

WAKEGNN_INSTANTIATE_MODEL(float)
WAKEGNN_INSTANTIATE_MODEL(double)

template GnnModel<double> cast_model<float, double>(const GnnModel<float>&);
template GnnModel<float> cast_model<double, float>(const GnnModel<double>&);
template GnnModel<float> cast_model<float, float>(const GnnModel<float>&);
template GnnModel<double> cast_model<double, double>(const GnnModel<double>&);

}  // namespace wakegnn::gnn
