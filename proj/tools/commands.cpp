#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "config_doc.hpp"
#include "run_manifest.hpp"
#include "wakegnn/common/error.hpp"
#include "wakegnn/farm/farm.hpp"
#include "wakegnn/gnn/model.hpp"
#include "wakegnn/meshgraph/mgf.hpp"
#include "wakegnn/meshgraph/vtk.hpp"
#include "wakegnn/nncore/checkpoint.hpp"
#include "wakegnn/train/predictor.hpp"
#include "wakegnn/train/trainer.hpp"

namespace wakegnn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ConfigDoc load_doc(const Common& c) {
  auto doc = ConfigDoc::load(c.config);
  if (c.seed) doc.override_seed(*c.seed);
  return doc;
}

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw DataError(fmt::format("{} not found: {}", what, p.string()));
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw DataError("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

/// First column of manifest.csv, header skipped.
std::vector<std::string> manifest_files(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw DataError("cannot open " + manifest.string());
  std::vector<std::string> files;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    files.push_back(line.substr(0, line.find(',')));
  }
  return files;
}

train::Precision checkpoint_precision(const nn::Checkpoint& ckp) {
  const auto& md = ckp.metadata;
  if (md.contains("run") && md.at("run").contains("precision")) {
    return train::precision_from_string(md.at("run").at("precision").get<std::string>());
  }
  return train::Precision::F32;
}

/// Type-erased predictor so commands need not care about the stored precision.
struct AnyPredictor {
  std::function<mesh::FieldSnapshot(const mesh::Graph&, const mesh::GlobalConditions&)> predict;
  std::function<train::MetricsReport(const train::Dataset&, train::Split, int)> evaluate;
  mesh::NormalizationStats stats;
};

template <typename T>
AnyPredictor wrap(train::Predictor<T> p) {
  auto sp = std::make_shared<const train::Predictor<T>>(std::move(p));
  return {[sp](const mesh::Graph& g, const mesh::GlobalConditions& c) { return sp->predict(g, c); },
          [sp](const train::Dataset& ds, train::Split s, int threads) { return train::evaluate(*sp, ds, s, threads); },
          sp->stats};
}

AnyPredictor load_any_predictor(const fs::path& path) {
  require_file(path, "checkpoint");
  const auto ckp = nn::read_checkpoint(path);
  if (checkpoint_precision(ckp) == train::Precision::F64) return wrap(train::predictor_from_checkpoint<double>(ckp));
  return wrap(train::predictor_from_checkpoint<float>(ckp));
}

std::shared_ptr<const mesh::Graph> mesh_from(const ConfigDoc& doc, const std::optional<fs::path>& path,
                                             RunManifest& m) {
  if (path) {
    require_file(*path, "mesh");
    m.input(*path);
    return std::make_shared<const mesh::Graph>(mesh::read_graph(*path));
  }
  mesh::Graph g;
  m.timing("build_mesh", timed([&] { g = mesh::build_graded_mesh(doc.mesh_spec(), doc.seed()); }));
  return std::make_shared<const mesh::Graph>(std::move(g));
}

/// The split recorded by `train`, or the config's when there is none.
struct SplitChoice {
  train::SplitRatios ratios;
  std::uint64_t seed = 0;
  mesh::TargetMode mode = mesh::TargetMode::InflowRelative;
};

json to_json(const SplitChoice& s, const train::Dataset& ds) {
  return {{"ratios", s.ratios}, {"seed", s.seed}, {"target_mode", mesh::to_string(s.mode)},
          {"train", ds.train}, {"val", ds.val}, {"test", ds.test}};
}

SplitChoice split_from_json(const json& j) {
  try {
    return {j.at("ratios").get<train::SplitRatios>(), j.at("seed").get<std::uint64_t>(),
            mesh::target_mode_from_string(j.at("target_mode").get<std::string>())};
  } catch (const json::exception& e) {
    throw DataError(std::string("split file: ") + e.what());
  }
}

void print_line(const std::string& s) { fmt::print("{}\n", s); }

}  // namespace

void run_gen_mesh(const Common& c) {
  const auto doc = load_doc(c);
  RunManifest m("gen-mesh", c.config, doc.seed());
  const auto spec = doc.mesh_spec();
  mesh::Graph g;
  m.timing("build_mesh", timed([&] { g = mesh::build_graded_mesh(spec, doc.seed()); }));
  fs::create_directories(c.out);
  const auto path = c.out / "mesh.mgf";
  mesh::write_graph(path, g);
  m.output(path);
  m.note("n_vertices", g.n_vertices());
  m.note("n_directed_edges", g.n_directed_edges());
  m.note("mesh", spec);
  m.write(c.out);
  print_line(fmt::format("mesh: {} vertices, {} directed edges -> {}", g.n_vertices(), g.n_directed_edges(),
                         path.string()));
}

void run_gen_data(const Common& c, const GenDataArgs& a) {
  const auto doc = load_doc(c);
  RunManifest m("gen-data", c.config, doc.seed());
  const auto graph = mesh_from(doc, a.mesh, m);
  const std::size_t n = a.n_samples.value_or(doc.n_samples());
  const auto rotor = synth::wake_rotor(doc.rotor());
  synth::DatasetFiles files;
  m.timing("generate", timed([&] {
             files = synth::gen_dataset(graph, n, doc.ranges(), rotor, doc.wake(), doc.seed(), c.out);
           }));
  if (!a.mesh) {
    mesh::write_graph(c.out / "mesh.mgf", *graph);
    m.output(c.out / "mesh.mgf");
  }
  m.output(files.manifest);
  m.output(files.metadata);
  m.note("n_samples", n);
  m.note("n_vertices", graph->n_vertices());
  m.write(c.out);
  print_line(fmt::format("dataset: {} samples on {} vertices -> {}", n, graph->n_vertices(), c.out.string()));
}

void run_train(const Common& c, const TrainArgs& a) {
  const auto doc = load_doc(c);
  RunManifest m("train", c.config, doc.seed());
  const auto manifest = a.data / "manifest.csv";
  require_file(manifest, "dataset manifest");
  m.input(manifest);

  std::vector<mesh::Sample> samples;
  m.timing("load", timed([&] { samples = synth::load_dataset(manifest); }));
  const SplitChoice split{doc.split(), doc.seed(), doc.target_mode()};
  const auto ds = train::split_dataset(std::move(samples), split.ratios, split.seed, split.mode);
  auto cfg = doc.train();
  if (a.steps) cfg.total_steps = *a.steps;
  train::validate(cfg);
  const auto mc = doc.model();

  fs::create_directories(c.out);
  write_json(c.out / "split.json", to_json(split, ds));
  spdlog::info("train: {} train / {} val / {} test samples, {} optimizer steps", ds.train.size(), ds.val.size(),
               ds.test.size(), cfg.optimizer_steps());

  json summary;
  const train::TrainOutputs outs{c.out, {}};
  auto run = [&]<typename T>(T) {
    auto model = gnn::init_model<T>(mc, cfg.seed);
    summary["n_params"] = gnn::count_params(model);
    const auto r = train::train_loop(std::move(model), ds, cfg, outs);
    summary["best_val_mse"] = std::isnan(r.best_val_mse) ? json(nullptr) : json(r.best_val_mse);
    summary["best_micro_step"] = r.best_micro_step;
    summary["initial_train_mse"] = r.initial_train_mse;
    summary["final_train_mse"] = r.final_train_mse;
  };
  m.timing("train", timed([&] {
             if (cfg.precision == train::Precision::F64) run(double{});
             else run(float{});
           }));
  summary["model"] = mc;
  summary["run"] = cfg;
  write_json(c.out / "train_summary.json", summary);

  for (const char* f : {"best.ckp", "final.ckp", "train_curve.csv", "val_curve.csv", "split.json",
                        "train_summary.json"}) {
    if (fs::exists(c.out / f)) m.output(c.out / f);
  }
  m.write(c.out);
  print_line(fmt::format("train: best val mse {} at micro-step {}; final train mse {:.6g}",
                         summary["best_val_mse"].dump(), summary["best_micro_step"].get<std::int64_t>(),
                         summary["final_train_mse"].get<double>()));
}

void run_evaluate(const Common& c, const EvaluateArgs& a) {
  const auto doc = load_doc(c);
  RunManifest m("evaluate", c.config, doc.seed());
  if (a.checkpoint.has_value() == a.predictions.has_value()) {
    throw UsageError("evaluate: give exactly one of --checkpoint or --predictions");
  }
  const auto split = train::split_from_string(a.split);
  const auto manifest = a.data / "manifest.csv";
  require_file(manifest, "dataset manifest");
  m.input(manifest);

  std::optional<fs::path> split_file = a.split_file;
  if (!split_file && a.checkpoint && fs::exists(a.checkpoint->parent_path() / "split.json")) {
    split_file = a.checkpoint->parent_path() / "split.json";
  }
  SplitChoice choice{doc.split(), doc.seed(), doc.target_mode()};
  if (split_file) {
    choice = split_from_json(read_json(*split_file));
    m.input(*split_file);
  }
  auto ds = train::split_dataset(synth::load_dataset(manifest), choice.ratios, choice.seed, choice.mode);
  const auto& idx = ds.indices(split);
  if (idx.empty()) throw DataError(fmt::format("evaluate: split '{}' is empty", a.split));

  train::MetricsReport report;
  if (a.checkpoint) {
    m.input(*a.checkpoint);
    const auto pred = load_any_predictor(*a.checkpoint);
    m.timing("evaluate", timed([&] { report = pred.evaluate(ds, split, c.threads); }));
  } else {
    const auto files = manifest_files(manifest);
    if (files.size() != ds.samples.size()) throw DataError("evaluate: manifest and dataset disagree");
    std::vector<mesh::FieldSnapshot> pred, truth;
    std::vector<mesh::GlobalConditions> cond;
    for (std::size_t i : idx) {
      const auto path = *a.predictions / files[i];
      require_file(path, "prediction");
      const auto f = mesh::read_mgf(path);
      if (f.graph.n_vertices() != ds.samples[i].graph->n_vertices()) {
        throw DataError(fmt::format("evaluate: {} has {} vertices, expected {}", path.string(),
                                    f.graph.n_vertices(), ds.samples[i].graph->n_vertices()));
      }
      pred.push_back(mesh::snapshot_from_blocks(f.fields));
      truth.push_back(ds.samples[i].fields);
      cond.push_back(ds.samples[i].conditions);
    }
    m.input(*a.predictions);
    m.timing("evaluate", timed([&] { report = train::compute_metrics(pred, truth, cond, ds.stats); }));
  }

  fs::create_directories(c.out);
  train::write_metrics_csv(c.out / "metrics.csv", report);
  const auto summary = train::format_summary(report);
  {
    std::ofstream out(c.out / "summary.txt");
    out << summary;
  }
  m.output(c.out / "metrics.csv");
  m.output(c.out / "summary.txt");
  m.note("split", a.split);
  m.note("median_accuracy", {{"speed", report.speed.median_accuracy}, {"tke", report.tke.median_accuracy}});
  m.write(c.out);
  fmt::print("{}", summary);
}

void run_predict(const Common& c, const PredictArgs& a) {
  const auto doc = load_doc(c);
  RunManifest m("predict", c.config, doc.seed());
  if (a.sample.has_value() == a.graph.has_value()) throw UsageError("predict: give exactly one of --sample or --graph");

  std::shared_ptr<const mesh::Graph> g;
  mesh::GlobalConditions cond;
  std::optional<mesh::FieldSnapshot> truth;
  m.timing("load_input", timed([&] {
             if (a.sample) {
               require_file(*a.sample, "sample");
               auto s = mesh::read_sample(*a.sample);
               g = s.graph;
               cond = s.conditions;
               truth = std::move(s.fields);
             } else {
               require_file(*a.graph, "graph");
               g = std::make_shared<const mesh::Graph>(mesh::read_graph(*a.graph));
               const auto p = doc.section("predict");
               if (!p.empty()) cond = p.get<mesh::GlobalConditions>();
             }
           }));
  m.input(a.sample ? *a.sample : *a.graph);
  if (a.u_inf) cond.u_inf = *a.u_inf;
  if (a.ti_inf) cond.ti_inf = *a.ti_inf;
  if (a.yaw_deg) cond.yaw_deg = *a.yaw_deg;
  mesh::validate(cond);

  AnyPredictor pred;
  m.timing("load_checkpoint", timed([&] { pred = load_any_predictor(a.checkpoint); }));
  m.input(a.checkpoint);
  mesh::FieldSnapshot out;
  const double secs = timed([&] { out = pred.predict(*g, cond); });
  m.timing("predict", secs);

  fs::create_directories(c.out);
  mesh::write_sample(c.out / "prediction.mgf", {g, cond, out});
  m.output(c.out / "prediction.mgf");

  if (a.vtk) {
    const std::size_t n = g->n_vertices();
    auto blocks = mesh::snapshot_blocks(out);
    std::vector<double> speed(n);
    for (std::size_t i = 0; i < n; ++i) speed[i] = out.speed(i);
    blocks.push_back({"speed", speed});
    if (truth) {
      for (auto b : mesh::snapshot_blocks(*truth)) {
        b.name += "_true";
        blocks.push_back(std::move(b));
      }
      std::vector<double> speed_true(n), speed_diff(n), speed_rel(n), tke_diff(n), tke_rel(n);
      for (std::size_t i = 0; i < n; ++i) {
        speed_true[i] = truth->speed(i);
        speed_diff[i] = speed[i] - speed_true[i];
        speed_rel[i] = std::abs(speed_diff[i]) / std::max(std::abs(speed_true[i]), train::kRelativeErrorFloor);
        tke_diff[i] = out.tke[i] - truth->tke[i];
        tke_rel[i] = std::abs(tke_diff[i]) / std::max(std::abs(truth->tke[i]), train::kRelativeErrorFloor);
      }
      blocks.push_back({"speed_true", std::move(speed_true)});
      blocks.push_back({"speed_diff", std::move(speed_diff)});
      blocks.push_back({"speed_relerr", std::move(speed_rel)});
      blocks.push_back({"tke_diff", std::move(tke_diff)});
      blocks.push_back({"tke_relerr", std::move(tke_rel)});
    }
    mesh::write_vtk(c.out / "prediction.vtk", *g, blocks);
    m.output(c.out / "prediction.vtk");
    const double hub = doc.rotor().hub_height;
    const auto hub_slice = mesh::slice_vertices(*g, 2, hub, a.slice_half_width);
    const auto mid_slice = mesh::slice_vertices(*g, 1, 0.0, a.slice_half_width);
    mesh::write_vtk_slice(c.out / "slice_hub.vtk", *g, blocks, hub_slice);
    mesh::write_vtk_slice(c.out / "slice_center.vtk", *g, blocks, mid_slice);
    m.output(c.out / "slice_hub.vtk");
    m.output(c.out / "slice_center.vtk");
  }
  m.note("n_vertices", g->n_vertices());
  m.note("conditions", cond);
  m.write(c.out);
  print_line(fmt::format("predict: {} vertices in {:.3f} s -> {}", g->n_vertices(), secs,
                         (c.out / "prediction.mgf").string()));
}

void run_farm(const Common& c, const FarmArgs& a) {
  const auto doc = load_doc(c);
  RunManifest m("farm", c.config, doc.seed());
  const auto section = doc.section("farm");

  fs::path layout_path;
  if (a.layout) layout_path = *a.layout;
  else if (section.contains("layout")) layout_path = doc.resolve(section.at("layout").get<std::string>());
  else throw UsageError("farm: no layout (use --layout or farm.layout in the config)");
  require_file(layout_path, "layout");
  m.input(layout_path);
  const auto layout = farm::load_layout_file(layout_path);

  mesh::GlobalConditions cond;
  cond.u_inf = a.u_inf.value_or(section.value("u_inf", cond.u_inf));
  cond.ti_inf = a.ti_inf.value_or(section.value("ti_inf", cond.ti_inf));
  cond.yaw_deg = a.yaw_deg.value_or(section.value("yaw_deg", cond.yaw_deg));
  mesh::validate(cond);

  farm::FarmOptions opts;
  opts.method = farm::superposition_from_string(a.method.value_or(section.value("method", std::string("sos"))));
  opts.averaging = farm::averaging_from_string(a.averaging.value_or(section.value("averaging", std::string("rotor"))));
  std::string kind = a.checkpoint ? "model" : a.provider.value_or(section.value("provider", std::string("analytic")));

  const auto wr = synth::wake_rotor(doc.rotor());
  std::unique_ptr<farm::WakeProvider> provider;
  m.timing("setup", timed([&] {
             if (kind == "analytic") {
               provider = std::make_unique<farm::AnalyticWakeProvider>(wr, doc.wake());
               return;
             }
             const auto g = mesh_from(doc, a.graph, m);
             if (kind == "synth") {
               provider = farm::make_synth_provider(g, wr, doc.wake());
             } else if (kind == "model") {
               if (!a.checkpoint) throw UsageError("farm: the model provider needs --checkpoint");
               m.input(*a.checkpoint);
               auto p = load_any_predictor(*a.checkpoint);
               provider = std::make_unique<farm::FieldWakeProvider>(g, p.predict, "model");
             } else {
               throw UsageError("farm: unknown provider '" + kind + "' (analytic|synth|model)");
             }
           }));

  farm::FarmResult r;
  m.timing("farm", timed([&] { r = farm::farm_power(layout, *provider, cond, opts); }));

  fs::create_directories(c.out);
  farm::write_farm_csv(c.out / "power.csv", r);
  m.output(c.out / "power.csv");

  // Power along each row relative to its most upstream turbine.
  std::map<std::string, std::vector<const farm::TurbineResult*>> rows;
  for (const auto& t : r.turbines) rows[t.row].push_back(&t);
  {
    std::ofstream out(c.out / "rows.csv");
    out << "row,position,id,x_m,power_w,power_norm\n";
    for (auto& [row, ts] : rows) {
      std::stable_sort(ts.begin(), ts.end(), [](auto* p, auto* q) { return p->x < q->x; });
      const double p0 = ts.front()->power;
      for (std::size_t k = 0; k < ts.size(); ++k) {
        out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", row, k + 1, ts[k]->id, ts[k]->x, ts[k]->power,
                           p0 > 0.0 ? ts[k]->power / p0 : 0.0);
      }
    }
  }
  m.output(c.out / "rows.csv");

  double total = 0.0;
  for (const auto& t : r.turbines) total += t.power;
  m.note("provider", r.provider);
  m.note("method", farm::to_string(opts.method));
  m.note("averaging", farm::to_string(opts.averaging));
  m.note("conditions", cond);
  m.note("n_turbines", r.turbines.size());
  m.note("total_power_w", total);
  m.write(c.out);
  print_line(fmt::format("farm: {} turbines, total {:.4g} MW ({} provider, {} superposition)", r.turbines.size(),
                         total * 1e-6, r.provider, farm::to_string(opts.method)));
}

void run_export(const Common& c, const ExportArgs& a) {
  RunManifest m("export", c.config, c.seed.value_or(0));
  require_file(a.input, "input");
  m.input(a.input);
  const auto f = mesh::read_mgf(a.input);
  auto blocks = f.fields;
  std::map<std::string, const std::vector<double>*> by_name;
  for (const auto& b : blocks) by_name[b.name] = &b.values;
  if (by_name.count("u") && by_name.count("v") && by_name.count("w") && !by_name.count("speed")) {
    const auto &u = *by_name["u"], &v = *by_name["v"], &w = *by_name["w"];
    std::vector<double> s(u.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(u[i] * u[i] + v[i] * v[i] + w[i] * w[i]);
    blocks.push_back({"speed", std::move(s)});
  }

  std::optional<std::vector<std::uint32_t>> verts;
  if (a.slice_axis) {
    static const std::map<std::string, int> axes{{"x", 0}, {"y", 1}, {"z", 2}};
    const auto it = axes.find(*a.slice_axis);
    if (it == axes.end()) throw UsageError("export: --slice-axis must be x, y or z");
    verts = mesh::slice_vertices(f.graph, it->second, a.slice_value, a.slice_half_width);
  }

  fs::create_directories(c.out);
  const auto stem = a.input.stem().string();
  fs::path path;
  if (a.format == "vtk") {
    path = c.out / (stem + ".vtk");
    if (verts) mesh::write_vtk_slice(path, f.graph, blocks, *verts);
    else mesh::write_vtk(path, f.graph, blocks);
  } else if (a.format == "csv") {
    path = c.out / (stem + ".csv");
    mesh::write_fields_csv(path, f.graph, blocks, verts);
  } else {
    throw UsageError("export: --format must be vtk or csv");
  }
  m.output(path);
  m.write(c.out);
  print_line(fmt::format("export: {} -> {}", a.input.string(), path.string()));
}

}  // namespace wakegnn::cli
