#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "wakegnn/gnn/model.hpp"
#include "wakegnn/meshgraph/features.hpp"
#include "wakegnn/meshgraph/sample.hpp"
#include "wakegnn/train/dataset.hpp"
#include "wakegnn/train/metrics.hpp"

namespace wakegnn::train {

/// Frozen model plus the normalisation it was trained with. Inference uses
/// full neighbourhoods. Safe to share between threads.
template <typename T>
struct Predictor {
  gnn::GnnModel<T> model;
  mesh::NormalizationStats stats;

  /// Standardised n x 4 output.
  nn::Tensor2<T> forward_normalized(const mesh::Graph& g, const mesh::GlobalConditions& cond) const;
  mesh::FieldSnapshot predict(const mesh::Graph& g, const mesh::GlobalConditions& cond) const;
};

/// Reads the model and metadata["normalization"] from a CKP1 checkpoint.
template <typename T>
Predictor<T> predictor_from_checkpoint(const nn::Checkpoint& ckp);

template <typename T>
Predictor<T> load_predictor(const std::filesystem::path& path);

/// Predicts every listed sample, on up to `threads` workers.
template <typename T>
std::vector<mesh::FieldSnapshot> predict_samples(const Predictor<T>& p, std::span<const mesh::Sample> samples,
                                                 std::span<const std::size_t> indices, int threads = 1);

/// Metrics of the predictor on one split. Throws DataError for an empty split.
template <typename T>
MetricsReport evaluate(const Predictor<T>& p, const Dataset& ds, Split split, int threads = 1);

/// Metrics on explicit samples.
template <typename T>
MetricsReport evaluate_samples(const Predictor<T>& p, std::span<const mesh::Sample> samples,
                               std::span<const std::size_t> indices, int threads = 1);

}  // namespace wakegnn::train
