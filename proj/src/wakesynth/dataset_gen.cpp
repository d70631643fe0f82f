#include "wakegnn/wakesynth/dataset_gen.hpp"

#include <fmt/format.h>

#include <fstream>
#include <random>
#include <sstream>

#include "wakegnn/common/error.hpp"
#include "wakegnn/common/random.hpp"
#include "wakegnn/meshgraph/mgf.hpp"

namespace wakegnn::synth {

void validate(const ConditionRanges& r) {
  if (!(r.u_min > 0.0 && r.u_max >= r.u_min)) throw ConfigError("ranges: need 0 < u_min <= u_max");
  if (!(r.ti_min >= 0.0 && r.ti_max >= r.ti_min && r.ti_max < 1.0)) throw ConfigError("ranges: need 0 <= ti_min <= ti_max < 1");
  if (!(r.yaw_min > -90.0 && r.yaw_max >= r.yaw_min && r.yaw_max < 90.0)) throw ConfigError("ranges: yaw must lie in (-90, 90)");
}

std::vector<mesh::GlobalConditions> draw_conditions(std::size_t n, const ConditionRanges& r, std::uint64_t seed) {
  validate(r);
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return uniform_unit(rng); };
  std::vector<mesh::GlobalConditions> out(n);
  for (auto& c : out) {
    c.u_inf = r.u_min + (r.u_max - r.u_min) * unit();
    c.ti_inf = r.ti_min + (r.ti_max - r.ti_min) * unit();
    c.yaw_deg = r.yaw_min + (r.yaw_max - r.yaw_min) * unit();
  }
  return out;
}

std::vector<mesh::Sample> generate_samples(std::shared_ptr<const mesh::Graph> graph, std::size_t n,
                                           const ConditionRanges& ranges, const WakeRotor& rotor,
                                           const WakeParams& params, std::uint64_t seed) {
  if (n == 0) throw ConfigError("gen_dataset: n_samples must be at least 1");
  std::vector<mesh::Sample> out;
  out.reserve(n);
  for (const auto& c : draw_conditions(n, ranges, seed)) {
    out.push_back({graph, c, synth_wake_field(*graph, c, rotor, params)});
  }
  return out;
}

DatasetFiles gen_dataset(std::shared_ptr<const mesh::Graph> graph, std::size_t n, const ConditionRanges& ranges,
                         const WakeRotor& rotor, const WakeParams& params, std::uint64_t seed,
                         const std::filesystem::path& out_dir) {
  const auto samples = generate_samples(graph, n, ranges, rotor, params, seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  DatasetFiles files;
  files.manifest = out_dir / "manifest.csv";
  std::ofstream manifest(files.manifest);
  if (!manifest) throw DataError("cannot write " + files.manifest.string());
  manifest << "file,u_inf,ti_inf,yaw_deg\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string name = fmt::format("sample_{:05d}.mgf", i);
    mesh::write_sample(out_dir / name, samples[i]);
    const auto& c = samples[i].conditions;
    manifest << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", name, c.u_inf, c.ti_inf, c.yaw_deg);
    files.samples.push_back(out_dir / name);
  }
  if (!manifest) throw DataError("failed writing " + files.manifest.string());

  files.metadata = out_dir / "generator.json";
  nlohmann::json meta = {{"wake", params},
                         {"rotor", {{"diameter", rotor.diameter}, {"hub_height", rotor.hub_height}}},
                         {"ranges", ranges},
                         {"seed", seed},
                         {"n_samples", n},
                         {"n_vertices", graph->n_vertices()}};
  std::ofstream meta_out(files.metadata);
  meta_out << meta.dump(2) << "\n";
  if (!meta_out) throw DataError("failed writing " + files.metadata.string());
  return files;
}

std::vector<mesh::Sample> load_dataset(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw DataError("cannot open manifest " + manifest.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("file,", 0) != 0) throw DataError("manifest " + manifest.string() + ": missing header");
  std::vector<mesh::Sample> out;
  std::vector<std::shared_ptr<const mesh::Graph>> graphs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::string file = line.substr(0, line.find(','));
    mesh::Sample s = mesh::read_sample(manifest.parent_path() / file);
    bool shared = false;
    for (const auto& g : graphs) {
      if (*g == *s.graph) {
        s.graph = g;
        shared = true;
        break;
      }
    }
    if (!shared) graphs.push_back(s.graph);
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataError("manifest " + manifest.string() + " lists no samples");
  return out;
}

void to_json(nlohmann::json& j, const ConditionRanges& r) {
  j = {{"u_inf", {r.u_min, r.u_max}}, {"ti_inf", {r.ti_min, r.ti_max}}, {"yaw_deg", {r.yaw_min, r.yaw_max}}};
}

void from_json(const nlohmann::json& j, ConditionRanges& r) {
  r = ConditionRanges{};
  auto pair = [&](const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 2) throw ConfigError(std::string("ranges: ") + key + " needs [min, max]");
    lo = v[0];
    hi = v[1];
  };
  pair("u_inf", r.u_min, r.u_max);
  pair("ti_inf", r.ti_min, r.ti_max);
  pair("yaw_deg", r.yaw_min, r.yaw_max);
  validate(r);
}

}  // namespace wakegnn::synth
