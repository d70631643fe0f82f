#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace wakegnn::cli {

/// Flags shared by every subcommand.
struct Common {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::filesystem::path out = ".";
};

struct GenDataArgs {
  std::optional<std::filesystem::path> mesh;
  std::optional<std::size_t> n_samples;
};

struct TrainArgs {
  std::filesystem::path data;
  std::optional<std::int64_t> steps;
};

struct EvaluateArgs {
  std::filesystem::path data;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> predictions;  // per-sample fields instead of a model
  std::optional<std::filesystem::path> split_file;
  std::string split = "test";
};

struct PredictArgs {
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> sample;
  std::optional<std::filesystem::path> graph;
  std::optional<double> u_inf, ti_inf, yaw_deg;
  bool vtk = false;
  double slice_half_width = 5.0;
};

struct FarmArgs {
  std::optional<std::filesystem::path> layout;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> graph;
  std::optional<std::string> method;
  std::optional<std::string> provider;
  std::optional<std::string> averaging;
  std::optional<double> u_inf, ti_inf, yaw_deg;
};

struct ExportArgs {
  std::filesystem::path input;
  std::string format = "vtk";
  std::optional<std::string> slice_axis;
  double slice_value = 0.0;
  double slice_half_width = 5.0;
};

void run_gen_mesh(const Common& c);
void run_gen_data(const Common& c, const GenDataArgs& a);
void run_train(const Common& c, const TrainArgs& a);
void run_evaluate(const Common& c, const EvaluateArgs& a);
void run_predict(const Common& c, const PredictArgs& a);
void run_farm(const Common& c, const FarmArgs& a);
void run_export(const Common& c, const ExportArgs& a);

}  // namespace wakegnn::cli
