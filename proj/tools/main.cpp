#include <cstdio>
#include <exception>
#include <functional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "wakegnn/common/alloc.hpp"
#include "wakegnn/common/error.hpp"
#include "wakegnn/common/log.hpp"

#ifndef WAKEGNN_VERSION
#define WAKEGNN_VERSION "unknown"
#endif

using namespace wakegnn;
using namespace wakegnn::cli;

namespace {

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Run config document (JSON)")->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "Master seed, overrides the config");
  sub->add_option("--threads", c.threads, "Worker cap")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "Output directory");
}

int fail(ErrorKind kind, const std::string& msg) {
  std::fprintf(stderr, "wakegnn: %s\n", msg.c_str());
  return static_cast<int>(kind);
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  tune_allocator();

  CLI::App app{"Graph-network wake surrogates, rotor loads and farm power"};
  app.set_version_flag("--version", WAKEGNN_VERSION);
  app.require_subcommand(1);

  Common common;
  GenDataArgs gd;
  TrainArgs tr;
  EvaluateArgs ev;
  PredictArgs pr;
  FarmArgs fa;
  ExportArgs ex;
  std::function<void()> action;

  auto* gen_mesh = app.add_subcommand("gen-mesh", "Build the graded mesh graph (mesh.mgf)");
  add_common(gen_mesh, common);
  gen_mesh->callback([&] { action = [&] { run_gen_mesh(common); }; });

  auto* gen_data = app.add_subcommand("gen-data", "Synthesise a wake dataset");
  add_common(gen_data, common);
  gen_data->add_option("--mesh", gd.mesh, "Existing mesh graph instead of building one");
  gen_data->add_option("--n", gd.n_samples, "Number of samples, overrides the config");
  gen_data->callback([&] { action = [&] { run_gen_data(common, gd); }; });

  auto* train = app.add_subcommand("train", "Train a surrogate on a dataset");
  add_common(train, common);
  train->add_option("--data", tr.data, "Dataset directory (manifest.csv)")->required();
  train->add_option("--steps", tr.steps, "Micro-steps, overrides the config");
  train->callback([&] { action = [&] { run_train(common, tr); }; });

  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint or stored predictions on one split");
  add_common(evaluate, common);
  evaluate->add_option("--data", ev.data, "Dataset directory (manifest.csv)")->required();
  evaluate->add_option("--checkpoint", ev.checkpoint, "Model checkpoint");
  evaluate->add_option("--predictions", ev.predictions, "Directory of per-sample predicted fields");
  evaluate->add_option("--split-file", ev.split_file, "split.json from a training run");
  evaluate->add_option("--split", ev.split, "train|val|test")->check(CLI::IsMember({"train", "val", "test"}));
  evaluate->callback([&] { action = [&] { run_evaluate(common, ev); }; });

  auto* predict = app.add_subcommand("predict", "Predict the flow field on one graph");
  add_common(predict, common);
  predict->add_option("--checkpoint", pr.checkpoint, "Model checkpoint")->required();
  predict->add_option("--sample", pr.sample, "Sample file; its fields become the reference");
  predict->add_option("--graph", pr.graph, "Bare graph file");
  predict->add_option("--u-inf", pr.u_inf, "Inflow speed, m/s");
  predict->add_option("--ti", pr.ti_inf, "Turbulence intensity");
  predict->add_option("--yaw", pr.yaw_deg, "Yaw, degrees");
  predict->add_flag("--vtk", pr.vtk, "Also write VTK field, slices and error maps");
  predict->add_option("--slice-half-width", pr.slice_half_width, "Slice half thickness, m");
  predict->callback([&] { action = [&] { run_predict(common, pr); }; });

  auto* farm = app.add_subcommand("farm", "Farm power by wake superposition");
  add_common(farm, common);
  farm->add_option("--layout", fa.layout, "Layout document");
  farm->add_option("--checkpoint", fa.checkpoint, "Use a trained model as the wake provider");
  farm->add_option("--graph", fa.graph, "Single-turbine graph for field providers");
  farm->add_option("--method", fa.method, "sos|linear|max")->check(CLI::IsMember({"sos", "linear", "max"}));
  farm->add_option("--provider", fa.provider, "analytic|synth|model");
  farm->add_option("--averaging", fa.averaging, "rotor|hub");
  farm->add_option("--u-inf", fa.u_inf, "Inflow speed, m/s");
  farm->add_option("--ti", fa.ti_inf, "Turbulence intensity");
  farm->add_option("--yaw", fa.yaw_deg, "Farm-wide yaw, degrees");
  farm->callback([&] { action = [&] { run_farm(common, fa); }; });

  auto* exp = app.add_subcommand("export", "Convert an MGF1 file to VTK or CSV");
  add_common(exp, common);
  exp->add_option("--input", ex.input, "MGF1 file")->required();
  exp->add_option("--format", ex.format, "vtk|csv")->check(CLI::IsMember({"vtk", "csv"}));
  exp->add_option("--slice-axis", ex.slice_axis, "x|y|z");
  exp->add_option("--slice-value", ex.slice_value, "Slice position, m");
  exp->add_option("--slice-half-width", ex.slice_half_width, "Slice half thickness, m");
  exp->callback([&] { action = [&] { run_export(common, ex); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::Usage);
  }

  try {
    action();
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(ErrorKind::Data, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorKind::Data, e.what());
  }
  return 0;
}
