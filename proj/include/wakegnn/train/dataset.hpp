#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wakegnn/meshgraph/features.hpp"
#include "wakegnn/meshgraph/sample.hpp"

namespace wakegnn::train {

enum class Split { Train, Val, Test };

std::string_view to_string(Split s);
/// Accepts "train", "val", "test"; throws UsageError otherwise.
Split split_from_string(std::string_view s);

struct SplitRatios {
  double train = 6200.0 / 7700.0;
  double val = 750.0 / 7700.0;
  double test = 750.0 / 7700.0;
};

/// Non-negative ratios summing to 1 within 1e-9, else ConfigError.
void validate(const SplitRatios& r);

/// Samples plus a disjoint, exhaustive train/val/test assignment. `stats` are
/// computed from the train split only.
struct Dataset {
  std::vector<mesh::Sample> samples;
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  mesh::NormalizationStats stats;

  const std::vector<std::size_t>& indices(Split s) const;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

/// val = floor(n r_val), test = floor(n r_test), the remainder goes to train.
SplitCounts split_counts(std::size_t n, const SplitRatios& r);

/// Deterministic shuffle per seed, then consecutive blocks train | val | test.
/// Index lists are returned sorted. Throws DataError for no samples. With an
/// empty train split `stats` stays at the identity.
Dataset split_dataset(std::vector<mesh::Sample> samples, const SplitRatios& r, std::uint64_t seed,
                      mesh::TargetMode mode = mesh::TargetMode::InflowRelative);

/// Mean / population std of coordinates, globals and (reference-scaled) targets
/// over `indices`. A zero spread maps to scale 1.
mesh::NormalizationStats compute_stats(std::span<const mesh::Sample> samples, std::span<const std::size_t> indices,
                                       mesh::TargetMode mode = mesh::TargetMode::InflowRelative);

void to_json(nlohmann::json& j, const SplitRatios& r);
void from_json(const nlohmann::json& j, SplitRatios& r);

}  // namespace wakegnn::train
