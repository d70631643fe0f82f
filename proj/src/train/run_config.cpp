#include "wakegnn/train/run_config.hpp"

#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::train {

std::string_view to_string(Precision p) { return p == Precision::F32 ? "f32" : "f64"; }

Precision precision_from_string(std::string_view s) {
  if (s == "f32") return Precision::F32;
  if (s == "f64") return Precision::F64;
  throw ConfigError("unknown precision '" + std::string(s) + "' (expected f32 or f64)");
}

void validate(const TrainRunConfig& c) {
  if (c.accumulation < 1) throw ConfigError("train: accumulation must be at least 1");
  if (c.total_steps < c.accumulation) throw ConfigError("train: total_steps must be at least accumulation");
  if (c.batch_size != 1) throw ConfigError("train: only batch_size 1 is supported");
  if (!(c.max_lr > 0.0)) throw ConfigError("train: max_lr must be positive");
  if (c.validations_per_epoch < 1) throw ConfigError("train: validations_per_epoch must be at least 1");
  if (c.max_val_samples < 0) throw ConfigError("train: max_val_samples must be non-negative");
}

void to_json(nlohmann::json& j, const TrainRunConfig& c) {
  j = {{"total_steps", c.total_steps},
       {"accumulation", c.accumulation},
       {"batch_size", c.batch_size},
       {"max_lr", c.max_lr},
       {"warmup_fraction", c.warmup_fraction},
       {"div_factor", c.div_factor},
       {"final_div_factor", c.final_div_factor},
       {"beta1", c.adamw.beta1},
       {"beta2", c.adamw.beta2},
       {"eps", c.adamw.eps},
       {"weight_decay", c.adamw.weight_decay},
       {"seed", c.seed},
       {"validations_per_epoch", c.validations_per_epoch},
       {"precision", std::string(to_string(c.precision))},
       {"sample_neighbors", c.sample_neighbors},
       {"max_val_samples", c.max_val_samples}};
}

void from_json(const nlohmann::json& j, TrainRunConfig& c) {
  c = TrainRunConfig{};
  c.total_steps = j.value("total_steps", c.total_steps);
  c.accumulation = j.value("accumulation", c.accumulation);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.max_lr = j.value("max_lr", c.max_lr);
  c.warmup_fraction = j.value("warmup_fraction", c.warmup_fraction);
  c.div_factor = j.value("div_factor", c.div_factor);
  c.final_div_factor = j.value("final_div_factor", c.final_div_factor);
  c.adamw.beta1 = j.value("beta1", c.adamw.beta1);
  c.adamw.beta2 = j.value("beta2", c.adamw.beta2);
  c.adamw.eps = j.value("eps", c.adamw.eps);
  c.adamw.weight_decay = j.value("weight_decay", c.adamw.weight_decay);
  c.seed = j.value("seed", c.seed);
  c.validations_per_epoch = j.value("validations_per_epoch", c.validations_per_epoch);
  c.precision = precision_from_string(j.value("precision", std::string("f32")));
  c.sample_neighbors = j.value("sample_neighbors", c.sample_neighbors);
  c.max_val_samples = j.value("max_val_samples", c.max_val_samples);
  validate(c);
}

}  // namespace wakegnn::train
