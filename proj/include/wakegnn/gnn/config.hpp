#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wakegnn::gnn {

enum class Variant { Sage, SageJkRes, Gcn, Gat };

std::string_view to_string(Variant v);
/// Accepts "sage", "sage_jk_res", "gcn", "gat"; throws ConfigError otherwise.
Variant variant_from_string(std::string_view s);

struct ModelConfig {
  Variant variant = Variant::SageJkRes;
  int n_layers = 6;
  int hidden = 128;
  int in_channels = 12;
  int out_channels = 4;
  double alpha = 0.1;  // initial-residual scale
  double beta = 0.9;   // layer-residual scale
  int gat_heads = 4;
  std::vector<int> fanout = {25, 10, 10, 10, 10, 10};  // used only when sampling is enabled
  std::string jk_mode = "concat";

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

void validate(const ModelConfig& c);

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

}  // namespace wakegnn::gnn
