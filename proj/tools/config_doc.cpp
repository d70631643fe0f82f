#include "config_doc.hpp"

#include <fstream>

#include "wakegnn/common/error.hpp"

namespace wakegnn::cli {

ConfigDoc ConfigDoc::load(const std::optional<std::filesystem::path>& path) {
  ConfigDoc doc;
  if (!path) return doc;
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open config " + path->string());
  try {
    doc.json_ = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path->string() + ": " + e.what());
  }
  if (!doc.json_.is_object()) throw ConfigError("config " + path->string() + ": top level must be an object");
  doc.path_ = *path;
  doc.base_dir_ = path->parent_path();
  return doc;
}

std::filesystem::path ConfigDoc::resolve(const std::string& p) const {
  const std::filesystem::path fp(p);
  return fp.is_absolute() ? fp : base_dir_ / fp;
}

nlohmann::json ConfigDoc::section(const char* name) const {
  return json_.contains(name) ? json_.at(name) : nlohmann::json::object();
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config ") + what + ": " + e.what());
  }
}

}  // namespace

std::uint64_t ConfigDoc::seed() const {
  return guarded("seed", [&] { return json_.value("seed", std::uint64_t{0}); });
}

gad::RotorSpec ConfigDoc::rotor() const {
  if (!json_.contains("rotor_file")) return gad::default_rotor();
  return gad::load_rotor_file(resolve(json_.at("rotor_file").get<std::string>()));
}

mesh::MeshSpec ConfigDoc::mesh_spec() const {
  return guarded("mesh", [&] {
    if (!json_.contains("mesh") || json_.at("mesh") == "desk") {
      const auto r = rotor();
      return mesh::desk_mesh_spec(r.diameter(), r.hub_height);
    }
    auto spec = json_.at("mesh").get<mesh::MeshSpec>();
    mesh::validate(spec);
    return spec;
  });
}

synth::WakeParams ConfigDoc::wake() const {
  return guarded("wake", [&] { return section("wake").get<synth::WakeParams>(); });
}

synth::ConditionRanges ConfigDoc::ranges() const {
  return guarded("dataset.ranges", [&] {
    const auto ds = section("dataset");
    return ds.contains("ranges") ? ds.at("ranges").get<synth::ConditionRanges>() : synth::ConditionRanges{};
  });
}

std::size_t ConfigDoc::n_samples() const {
  return guarded("dataset.n_samples", [&] { return section("dataset").value("n_samples", std::size_t{200}); });
}

train::SplitRatios ConfigDoc::split() const {
  return guarded("split", [&] {
    return json_.contains("split") ? json_.at("split").get<train::SplitRatios>() : train::SplitRatios{};
  });
}

mesh::TargetMode ConfigDoc::target_mode() const {
  return guarded("target_mode", [&] {
    return mesh::target_mode_from_string(json_.value("target_mode", std::string("inflow_relative")));
  });
}

gnn::ModelConfig ConfigDoc::model() const {
  return guarded("model", [&] {
    auto c = section("model").get<gnn::ModelConfig>();
    gnn::validate(c);
    return c;
  });
}

train::TrainRunConfig ConfigDoc::train() const {
  return guarded("train", [&] {
    auto t = section("train");
    if (!t.contains("seed")) t["seed"] = seed();
    return t.get<train::TrainRunConfig>();
  });
}

}  // namespace wakegnn::cli
