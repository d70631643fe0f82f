#pragma once

#include <cstdint>
#include <string_view>

#include <json.hpp>

#include "wakegnn/nncore/adamw.hpp"

namespace wakegnn::train {

enum class Precision { F32, F64 };

std::string_view to_string(Precision p);
Precision precision_from_string(std::string_view s);

/// Training run settings. `total_steps` counts per-sample passes (micro-steps);
/// the optimizer steps once every `accumulation` of them.
struct TrainRunConfig {
  std::int64_t total_steps = 20000;
  std::int64_t accumulation = 16;
  std::int64_t batch_size = 1;
  double max_lr = 1e-3;
  double warmup_fraction = 0.3;
  double div_factor = 25.0;
  double final_div_factor = 1e4;
  nn::AdamWHyper adamw;
  std::uint64_t seed = 0;
  int validations_per_epoch = 2;
  Precision precision = Precision::F32;
  bool sample_neighbors = false;
  /// Cap on validation samples scored at each check (0 = all).
  std::int64_t max_val_samples = 0;

  std::int64_t optimizer_steps() const { return total_steps / accumulation; }
};

/// accumulation >= 1, total_steps >= accumulation, batch_size == 1, positive rates.
void validate(const TrainRunConfig& c);

void to_json(nlohmann::json& j, const TrainRunConfig& c);
void from_json(const nlohmann::json& j, TrainRunConfig& c);

}  // namespace wakegnn::train
