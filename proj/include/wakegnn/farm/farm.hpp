#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "wakegnn/farm/layout.hpp"
#include "wakegnn/farm/rotor_average.hpp"
#include "wakegnn/farm/superposition.hpp"
#include "wakegnn/meshgraph/sample.hpp"
#include "wakegnn/wakesynth/wake.hpp"

namespace wakegnn::farm {

struct QueryFlags {
  bool extrapolated_x = false;  // points beyond the covered x range reused the farthest slice
};

/// Single-turbine wake model queried in the wake frame of its turbine: rotor at
/// x = y = 0, z measured from the ground.
class WakeProvider {
 public:
  virtual ~WakeProvider() = default;
  /// Flow speed at each point. Throws DomainError for points the provider cannot cover laterally.
  virtual std::vector<double> speeds(const mesh::GlobalConditions& cond, std::span<const Vec3> points,
                                     QueryFlags& flags) const = 0;
  virtual std::string name() const = 0;
  /// Largest downstream distance covered without extrapolation.
  virtual double coverage_x() const;
};

/// Closed-form wake evaluated pointwise.
class AnalyticWakeProvider final : public WakeProvider {
 public:
  AnalyticWakeProvider(synth::WakeRotor rotor, synth::WakeParams params);
  std::vector<double> speeds(const mesh::GlobalConditions& cond, std::span<const Vec3> points,
                             QueryFlags& flags) const override;
  std::string name() const override { return "analytic"; }

 private:
  synth::WakeRotor rotor_;
  synth::WakeParams params_;
};

/// Per-vertex field on a single-turbine graph, produced on demand for each
/// inflow condition (a GNN prediction or a synthesised oracle field) and
/// interpolated with FieldSampler. Fields are cached per condition.
class FieldWakeProvider final : public WakeProvider {
 public:
  using FieldFn = std::function<mesh::FieldSnapshot(const mesh::Graph&, const mesh::GlobalConditions&)>;

  FieldWakeProvider(std::shared_ptr<const mesh::Graph> graph, FieldFn field, std::string name);
  std::vector<double> speeds(const mesh::GlobalConditions& cond, std::span<const Vec3> points,
                             QueryFlags& flags) const override;
  std::string name() const override { return name_; }
  double coverage_x() const override;
  const FieldSampler& sampler() const { return sampler_; }

 private:
  const std::vector<double>& speed_field(const mesh::GlobalConditions& cond) const;

  FieldSampler sampler_;
  FieldFn field_;
  std::string name_;
  mutable std::mutex mutex_;
  mutable std::map<std::array<double, 3>, std::vector<double>> cache_;
};

/// wakesynth fields on `graph` standing in for the model.
std::unique_ptr<FieldWakeProvider> make_synth_provider(std::shared_ptr<const mesh::Graph> graph,
                                                       synth::WakeRotor rotor, synth::WakeParams params);

struct FarmOptions {
  Superposition method = Superposition::Sos;
  Averaging averaging = Averaging::Rotor;
};

struct TurbineResult {
  std::string id;
  std::string row;
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;      // superposed inflow U_i, m/s
  double power = 0.0;  // W
  std::size_t n_wakes = 0;
  bool extrapolated = false;     // some wake needed x beyond the provider's coverage
  bool deficit_clamped = false;  // some deficit fell outside [0, 1] and was clamped
  std::size_t wakes_outside = 0; // upstream turbines whose wake did not reach this rotor's footprint
};

struct FarmResult {
  std::vector<TurbineResult> turbines;  // layout order
  std::string provider;
  double coverage_x = 0.0;
  FarmOptions options;
  mesh::GlobalConditions conditions;
};

/// Turbines are processed in increasing x. Each upstream turbine j (same row
/// when rows are set) contributes its wake at turbine i evaluated for
/// conditions (U_j, TI, yaw_j); the deficits relative to U_j are superposed on
/// U_inf and P_i follows from the turbine's power curve.
FarmResult farm_power(const FarmLayout& layout, const WakeProvider& provider, const mesh::GlobalConditions& cond,
                      const FarmOptions& options = {});

/// Superposed speed at every vertex of a farm-scale graph, using the inflow
/// velocities of a previous farm_power run.
std::vector<double> farm_field(const FarmLayout& layout, const WakeProvider& provider, const FarmResult& result,
                               const mesh::Graph& g);

/// CSV with columns id,u_ms,power_w,row,n_wakes,flags.
void write_farm_csv(const std::filesystem::path& path, const FarmResult& r);

}  // namespace wakegnn::farm
