#include "wakegnn/gnn/config.hpp"

#include "wakegnn/common/error.hpp"

namespace wakegnn::gnn {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Sage: return "sage";
    case Variant::SageJkRes: return "sage_jk_res";
    case Variant::Gcn: return "gcn";
    case Variant::Gat: return "gat";
  }
  return "unknown";
}

Variant variant_from_string(std::string_view s) {
  if (s == "sage") return Variant::Sage;
  if (s == "sage_jk_res") return Variant::SageJkRes;
  if (s == "gcn") return Variant::Gcn;
  if (s == "gat") return Variant::Gat;
  throw ConfigError("unknown model variant '" + std::string(s) + "'");
}

void validate(const ModelConfig& c) {
  if (c.n_layers < 1) throw ConfigError("model: n_layers must be >= 1");
  if (c.hidden < 1 || c.in_channels < 1 || c.out_channels < 1) throw ConfigError("model: widths must be positive");
  if (c.alpha < 0.0 || c.beta < 0.0) throw ConfigError("model: alpha and beta must be non-negative");
  if (c.variant == Variant::Gat && (c.gat_heads < 1 || c.hidden % c.gat_heads != 0)) {
    throw DimensionError("model: hidden width must be divisible by gat_heads");
  }
  for (int f : c.fanout) {
    if (f < 1) throw ConfigError("model: fanout entries must be >= 1");
  }
  if (c.jk_mode != "concat") throw ConfigError("model: only jk_mode 'concat' is supported");
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = {{"variant", std::string(to_string(c.variant))},
       {"n_layers", c.n_layers},
       {"hidden", c.hidden},
       {"in_channels", c.in_channels},
       {"out_channels", c.out_channels},
       {"alpha", c.alpha},
       {"beta", c.beta},
       {"gat_heads", c.gat_heads},
       {"fanout", c.fanout},
       {"jk_mode", c.jk_mode}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  c = ModelConfig{};
  if (j.contains("variant")) c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.n_layers = j.value("n_layers", c.n_layers);
  c.hidden = j.value("hidden", c.hidden);
  c.in_channels = j.value("in_channels", c.in_channels);
  c.out_channels = j.value("out_channels", c.out_channels);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.gat_heads = j.value("gat_heads", c.gat_heads);
  c.fanout = j.value("fanout", c.fanout);
  c.jk_mode = j.value("jk_mode", c.jk_mode);
}

}  // namespace wakegnn::gnn
