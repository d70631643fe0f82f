#include "wakegnn/meshgraph/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::mesh {

std::string_view to_string(TargetMode m) { return m == TargetMode::Physical ? "physical" : "inflow_relative"; }

TargetMode target_mode_from_string(std::string_view s) {
  if (s == "physical") return TargetMode::Physical;
  if (s == "inflow_relative") return TargetMode::InflowRelative;
  throw ConfigError("unknown target mode '" + std::string(s) + "' (expected physical or inflow_relative)");
}

std::array<double, 4> target_reference(const GlobalConditions& cond, TargetMode mode) {
  if (mode == TargetMode::Physical) return {1.0, 1.0, 1.0, 1.0};
  const double u2 = cond.u_inf * cond.u_inf;
  const double k = std::max(1.5 * cond.ti_inf * cond.ti_inf * u2, 1e-4 * u2);
  return {cond.u_inf, cond.u_inf, cond.u_inf, k};
}

void validate(const NormalizationStats& s) {
  auto check = [](const auto& means, const auto& scales, const char* what) {
    for (std::size_t i = 0; i < means.size(); ++i) {
      if (!std::isfinite(means[i]) || !std::isfinite(scales[i]) || scales[i] == 0.0) {
        throw ConfigError(std::string("normalization: ") + what + " stats must be finite with nonzero scale");
      }
    }
  };
  check(s.coord_mean, s.coord_scale, "coordinate");
  check(s.global_mean, s.global_scale, "global");
  check(s.target_mean, s.target_scale, "target");
}

FeatureMatrix assemble_features(const Graph& g, const GlobalConditions& cond, const NormalizationStats& norm) {
  validate(norm);
  const std::size_t n = g.n_vertices();
  FeatureMatrix f = FeatureMatrix::Zero(static_cast<Eigen::Index>(n), kFeatureCount);
  const std::array<double, 3> globals = {cond.u_inf, cond.ti_inf, cond.yaw_deg};
  std::array<double, 3> gnorm{};
  for (int a = 0; a < 3; ++a) gnorm[a] = (globals[a] - norm.global_mean[a]) / norm.global_scale[a];

  const auto& pos = g.positions();
  const auto& tags = g.boundary_tags();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (int a = 0; a < 3; ++a) f(r, kCoordOffset + a) = (pos[i][a] - norm.coord_mean[a]) / norm.coord_scale[a];
    const auto code = static_cast<std::size_t>(tags[i]);
    if (code >= kBoundaryTagCount) {
      throw DataError("assemble_features: unknown boundary tag at vertex " + std::to_string(i));
    }
    f(r, kOneHotOffset + static_cast<Eigen::Index>(code)) = 1.0;
    for (int a = 0; a < 3; ++a) f(r, kGlobalOffset + a) = gnorm[a];
  }
  return f;
}

nn::Tensor2<double> normalize_targets(const FieldSnapshot& f, const GlobalConditions& cond,
                                      const NormalizationStats& norm) {
  const auto ref = target_reference(cond, norm.target_mode);
  const auto n = static_cast<Eigen::Index>(f.size());
  nn::Tensor2<double> t(n, kTargetCount);
  const std::array<const std::vector<double>*, 4> cols = {&f.u, &f.v, &f.w, &f.tke};
  for (int c = 0; c < kTargetCount; ++c) {
    const auto& src = *cols[c];
    for (Eigen::Index i = 0; i < n; ++i) t(i, c) = (src[i] / ref[c] - norm.target_mean[c]) / norm.target_scale[c];
  }
  return t;
}

FieldSnapshot denormalize_targets(const nn::Tensor2<double>& t, const GlobalConditions& cond,
                                  const NormalizationStats& norm) {
  const auto ref = target_reference(cond, norm.target_mode);
  if (t.cols() != kTargetCount) throw DimensionError("denormalize_targets: expected 4 columns");
  FieldSnapshot f = FieldSnapshot::zeros(static_cast<std::size_t>(t.rows()));
  const std::array<std::vector<double>*, 4> cols = {&f.u, &f.v, &f.w, &f.tke};
  for (int c = 0; c < kTargetCount; ++c) {
    auto& dst = *cols[c];
    for (Eigen::Index i = 0; i < t.rows(); ++i) dst[i] = (t(i, c) * norm.target_scale[c] + norm.target_mean[c]) * ref[c];
  }
  return f;
}

void to_json(nlohmann::json& j, const NormalizationStats& s) {
  j = {{"coord_mean", s.coord_mean},   {"coord_scale", s.coord_scale},   {"global_mean", s.global_mean},
       {"global_scale", s.global_scale}, {"target_mean", s.target_mean}, {"target_scale", s.target_scale},
       {"target_mode", std::string(to_string(s.target_mode))}};
}

void from_json(const nlohmann::json& j, NormalizationStats& s) {
  j.at("coord_mean").get_to(s.coord_mean);
  j.at("coord_scale").get_to(s.coord_scale);
  j.at("global_mean").get_to(s.global_mean);
  j.at("global_scale").get_to(s.global_scale);
  j.at("target_mean").get_to(s.target_mean);
  j.at("target_scale").get_to(s.target_scale);
  s.target_mode = target_mode_from_string(j.value("target_mode", std::string("physical")));
}

}  // namespace wakegnn::mesh
