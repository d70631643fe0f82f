#pragma once

#include <array>
#include <string_view>

#include <json.hpp>

#include "wakegnn/meshgraph/sample.hpp"
#include "wakegnn/nncore/tensor.hpp"

namespace wakegnn::mesh {

/// 3 standardised coordinates + 6 one-hot boundary columns + 3 standardised globals.
inline constexpr int kFeatureCount = 12;
inline constexpr int kCoordOffset = 0;
inline constexpr int kOneHotOffset = 3;
inline constexpr int kGlobalOffset = 9;
inline constexpr int kTargetCount = 4;  // u, v, w, tke

using FeatureMatrix = nn::Tensor2<double>;

/// How targets are made dimensionless before standardisation.
///   Physical: raw u, v, w (m/s) and tke (m^2/s^2).
///   InflowRelative: u, v, w over u_inf and tke over the inflow reference
///   1.5 ti^2 u_inf^2 (floored at 1e-4 u_inf^2).
enum class TargetMode { Physical, InflowRelative };

std::string_view to_string(TargetMode m);
TargetMode target_mode_from_string(std::string_view s);

/// Per-channel divisors applied to (u, v, w, tke) of one sample.
std::array<double, 4> target_reference(const GlobalConditions& cond, TargetMode mode);

/// Standardisation statistics computed on the training split and stored with
/// the checkpoint. Globals are ordered (u_inf, ti_inf, yaw_deg), targets (u, v, w, tke).
struct NormalizationStats {
  TargetMode target_mode = TargetMode::InflowRelative;
  std::array<double, 3> coord_mean{0.0, 0.0, 0.0};
  std::array<double, 3> coord_scale{1.0, 1.0, 1.0};
  std::array<double, 3> global_mean{0.0, 0.0, 0.0};
  std::array<double, 3> global_scale{1.0, 1.0, 1.0};
  std::array<double, 4> target_mean{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> target_scale{1.0, 1.0, 1.0, 1.0};

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

/// Throws ConfigError unless every entry is finite and every scale is nonzero.
void validate(const NormalizationStats& s);

/// Pure function of its inputs: n x 12 feature matrix.
FeatureMatrix assemble_features(const Graph& g, const GlobalConditions& cond, const NormalizationStats& norm);

/// Standardised n x 4 target matrix (u, v, w, tke).
nn::Tensor2<double> normalize_targets(const FieldSnapshot& f, const GlobalConditions& cond,
                                      const NormalizationStats& norm);
/// Inverse of normalize_targets.
FieldSnapshot denormalize_targets(const nn::Tensor2<double>& t, const GlobalConditions& cond,
                                  const NormalizationStats& norm);

void to_json(nlohmann::json& j, const NormalizationStats& s);
void from_json(const nlohmann::json& j, NormalizationStats& s);

}  // namespace wakegnn::mesh
