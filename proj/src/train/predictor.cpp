#include "wakegnn/train/predictor.hpp"

#include <algorithm>
#include <thread>

#include "wakegnn/common/error.hpp"

namespace wakegnn::train {

template <typename T>
nn::Tensor2<T> Predictor<T>::forward_normalized(const mesh::Graph& g, const mesh::GlobalConditions& cond) const {
  const nn::Tensor2<T> x = mesh::assemble_features(g, cond, stats).template cast<T>();
  return gnn::model_forward(model, std::span<const gnn::NeighborLists>(&g.csr(), 1), x);
}

template <typename T>
mesh::FieldSnapshot Predictor<T>::predict(const mesh::Graph& g, const mesh::GlobalConditions& cond) const {
  return mesh::denormalize_targets(forward_normalized(g, cond).template cast<double>(), cond, stats);
}

template <typename T>
Predictor<T> predictor_from_checkpoint(const nn::Checkpoint& ckp) {
  Predictor<T> p;
  p.model = gnn::model_from_checkpoint<T>(ckp);
  if (!ckp.metadata.contains("normalization")) throw DataError("checkpoint has no normalization stats");
  try {
    p.stats = ckp.metadata.at("normalization").get<mesh::NormalizationStats>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint normalization stats: ") + e.what());
  }
  mesh::validate(p.stats);
  return p;
}

template <typename T>
Predictor<T> load_predictor(const std::filesystem::path& path) {
  return predictor_from_checkpoint<T>(nn::read_checkpoint(path));
}

template <typename T>
std::vector<mesh::FieldSnapshot> predict_samples(const Predictor<T>& p, std::span<const mesh::Sample> samples,
                                                 std::span<const std::size_t> indices, int threads) {
  std::vector<mesh::FieldSnapshot> out(indices.size());
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, indices.size());
  auto run = [&](std::size_t w) {
    for (std::size_t k = w; k < indices.size(); k += workers) {
      const mesh::Sample& s = samples[indices[k]];
      out[k] = p.predict(*s.graph, s.conditions);
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return out;
}

template <typename T>
MetricsReport evaluate_samples(const Predictor<T>& p, std::span<const mesh::Sample> samples,
                               std::span<const std::size_t> indices, int threads) {
  if (indices.empty()) throw DataError("evaluate: empty split");
  const auto pred = predict_samples(p, samples, indices, threads);
  std::vector<mesh::FieldSnapshot> truth;
  std::vector<mesh::GlobalConditions> cond;
  for (std::size_t i : indices) {
    truth.push_back(samples[i].fields);
    cond.push_back(samples[i].conditions);
  }
  return compute_metrics(pred, truth, cond, p.stats);
}

template <typename T>
MetricsReport evaluate(const Predictor<T>& p, const Dataset& ds, Split split, int threads) {
  const auto& idx = ds.indices(split);
  if (idx.empty()) throw DataError("evaluate: split '" + std::string(to_string(split)) + "' is empty");
  return evaluate_samples(p, ds.samples, idx, threads);
}

#define WAKEGNN_INSTANTIATE(T)                                                                                    \
  template struct Predictor<T>;                                                                                   \
  template Predictor<T> predictor_from_checkpoint<T>(const nn::Checkpoint&);                                      \
  template Predictor<T> load_predictor<T>(const std::filesystem::path&);                                          \
  template std::vector<mesh::FieldSnapshot> predict_samples<T>(const Predictor<T>&, std::span<const mesh::Sample>, \
                                                               std::span<const std::size_t>, int);               \
  template MetricsReport evaluate_samples<T>(const Predictor<T>&, std::span<const mesh::Sample>,                  \
                                             std::span<const std::size_t>, int);                                 \
  template MetricsReport evaluate<T>(const Predictor<T>&, const Dataset&, Split, int);

WAKEGNN_INSTANTIATE(float)
WAKEGNN_INSTANTIATE(double)

}  // namespace wakegnn::train
