#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include <json.hpp>

#include "wakegnn/meshgraph/sample.hpp"
#include "wakegnn/wakesynth/wake.hpp"

namespace wakegnn::synth {

/// Closed intervals the inflow conditions are drawn from.
struct ConditionRanges {
  double u_min = 5.0, u_max = 10.0;
  double ti_min = 0.05, ti_max = 0.15;
  double yaw_min = -30.0, yaw_max = 30.0;
};

void validate(const ConditionRanges& r);

/// n independent uniform draws, deterministic per seed.
std::vector<mesh::GlobalConditions> draw_conditions(std::size_t n, const ConditionRanges& r, std::uint64_t seed);

/// In-memory dataset: one sample per drawn condition, all sharing `graph`.
std::vector<mesh::Sample> generate_samples(std::shared_ptr<const mesh::Graph> graph, std::size_t n,
                                           const ConditionRanges& ranges, const WakeRotor& rotor,
                                           const WakeParams& params, std::uint64_t seed);

struct DatasetFiles {
  std::vector<std::filesystem::path> samples;
  std::filesystem::path manifest;
  std::filesystem::path metadata;
};

/// Writes sample_NNNNN.mgf files, manifest.csv (file, u_inf, ti_inf, yaw_deg)
/// and generator.json (wake constants, rotor, ranges, seed) into `out_dir`.
DatasetFiles gen_dataset(std::shared_ptr<const mesh::Graph> graph, std::size_t n, const ConditionRanges& ranges,
                         const WakeRotor& rotor, const WakeParams& params, std::uint64_t seed,
                         const std::filesystem::path& out_dir);

/// Loads the samples listed in a manifest.csv; samples whose graphs are equal
/// share a single Graph instance.
std::vector<mesh::Sample> load_dataset(const std::filesystem::path& manifest);

void to_json(nlohmann::json& j, const ConditionRanges& r);
void from_json(const nlohmann::json& j, ConditionRanges& r);

}  // namespace wakegnn::synth
