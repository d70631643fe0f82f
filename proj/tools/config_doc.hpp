#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "wakegnn/gad/rotor.hpp"
#include "wakegnn/gnn/config.hpp"
#include "wakegnn/meshgraph/features.hpp"
#include "wakegnn/meshgraph/mesh.hpp"
#include "wakegnn/train/dataset.hpp"
#include "wakegnn/train/run_config.hpp"
#include "wakegnn/wakesynth/dataset_gen.hpp"

namespace wakegnn::cli {

/// The run config document. Every section is optional; relative paths resolve
/// against the document's directory.
///
///   seed          master seed (default 0)
///   rotor_file    rotor definition (default: built-in geometry, no blade table)
///   mesh          "desk" or a mesh spec object
///   wake          wake generator constants
///   dataset       { n_samples, ranges: { u_inf, ti_inf, yaw_deg } }
///   split         [train, val, test] ratios
///   target_mode   "inflow_relative" | "physical"
///   model         model config
///   train         training run config
///   farm          { layout, u_inf, ti_inf, yaw_deg, method, averaging, provider }
class ConfigDoc {
 public:
  ConfigDoc() = default;
  static ConfigDoc load(const std::optional<std::filesystem::path>& path);

  const std::optional<std::filesystem::path>& path() const { return path_; }
  const nlohmann::json& json() const { return json_; }
  std::filesystem::path resolve(const std::string& p) const;

  std::uint64_t seed() const;
  gad::RotorSpec rotor() const;
  mesh::MeshSpec mesh_spec() const;
  synth::WakeParams wake() const;
  synth::ConditionRanges ranges() const;
  std::size_t n_samples() const;
  train::SplitRatios split() const;
  mesh::TargetMode target_mode() const;
  gnn::ModelConfig model() const;
  train::TrainRunConfig train() const;
  nlohmann::json section(const char* name) const;

  void override_seed(std::uint64_t s) { json_["seed"] = s; }

 private:
  std::optional<std::filesystem::path> path_;
  std::filesystem::path base_dir_;
  nlohmann::json json_ = nlohmann::json::object();
};

}  // namespace wakegnn::cli
