#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "wakegnn/gnn/model.hpp"
#include "wakegnn/train/dataset.hpp"
#include "wakegnn/train/run_config.hpp"

namespace wakegnn::train {

/// One optimizer step: mean loss of its micro-steps and the rate applied.
struct CurvePoint {
  std::int64_t optimizer_step = 0;
  std::int64_t micro_step = 0;  // micro-steps completed after this update
  double lr = 0.0;
  double train_loss = 0.0;
};

struct ValPoint {
  std::int64_t micro_step = 0;
  double epoch = 0.0;
  double val_mse = 0.0;
  bool improved = false;
};

template <typename T>
struct TrainResult {
  gnn::GnnModel<T> final_model;
  gnn::GnnModel<T> best_model;
  nn::AdamWState<T> optimizer;
  double best_val_mse = 0.0;  // NaN when there is no validation split
  std::int64_t best_micro_step = 0;
  std::vector<CurvePoint> train_curve;
  std::vector<ValPoint> val_curve;
  std::vector<double> best_history;  // strictly decreasing
  double initial_train_mse = 0.0;    // mean standardised MSE over the train split
  double final_train_mse = 0.0;
};

struct TrainOutputs {
  /// When set: best.ckp (on every validation improvement), final.ckp,
  /// train_curve.csv and val_curve.csv are written here.
  std::optional<std::filesystem::path> dir;
  std::function<void(const ValPoint&)> on_validation;
};

/// Gradient-accumulated AdamW training with a one-cycle schedule over the
/// optimizer steps. Micro-step s trains on one train sample; the sample order is
/// reshuffled every epoch. Validation runs `validations_per_epoch` times per
/// epoch and once more at the end. Throws NumericalError on a non-finite loss.
template <typename T>
TrainResult<T> train_loop(gnn::GnnModel<T> model, const Dataset& ds, const TrainRunConfig& cfg,
                          const TrainOutputs& out = {});

/// Mean standardised MSE of the model over the listed samples.
template <typename T>
double mean_mse(const gnn::GnnModel<T>& model, const Dataset& ds, std::span<const std::size_t> indices);

/// CKP1 checkpoint with model config, normalisation stats, run config and seed in the header.
template <typename T>
nn::Checkpoint make_checkpoint(const gnn::GnnModel<T>& model, const nn::AdamWState<T>* optimizer,
                               const mesh::NormalizationStats& stats, const TrainRunConfig& cfg,
                               nlohmann::json extra = nlohmann::json::object());

}  // namespace wakegnn::train
