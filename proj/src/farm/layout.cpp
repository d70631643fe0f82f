#include "wakegnn/farm/layout.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "wakegnn/common/error.hpp"

namespace wakegnn::farm {

const gad::RotorSpec& FarmLayout::rotor(const Turbine& t) const {
  const auto it = rotors.find(t.rotor);
  if (it == rotors.end()) throw ConfigError("turbine " + t.id + ": unknown rotor '" + t.rotor + "'");
  return it->second;
}

const gad::PowerCurve& FarmLayout::curve(const Turbine& t) const {
  if (t.curve.empty()) return rotor(t).power_curve;
  const auto it = curves.find(t.curve);
  if (it == curves.end()) throw ConfigError("turbine " + t.id + ": unknown power curve '" + t.curve + "'");
  return it->second;
}

void validate(const FarmLayout& l) {
  if (l.turbines.empty()) throw ConfigError("layout: no turbines");
  std::set<std::string> ids;
  for (const auto& t : l.turbines) {
    if (t.id.empty()) throw ConfigError("layout: turbine without id");
    if (!ids.insert(t.id).second) throw ConfigError("layout: duplicate turbine id " + t.id);
    if (!std::isfinite(t.x) || !std::isfinite(t.y)) throw ConfigError("layout: turbine " + t.id + " has a non-finite position");
    l.rotor(t);
    l.curve(t);
  }
  for (std::size_t i = 0; i < l.turbines.size(); ++i) {
    for (std::size_t j = i + 1; j < l.turbines.size(); ++j) {
      const auto& a = l.turbines[i];
      const auto& b = l.turbines[j];
      const double d = std::max(l.rotor(a).diameter(), l.rotor(b).diameter());
      if (std::hypot(a.x - b.x, a.y - b.y) < d) {
        throw ConfigError("layout: turbines " + a.id + " and " + b.id + " are closer than one rotor diameter");
      }
    }
  }
}

namespace {

nlohmann::json resolve(const nlohmann::json& entry, const std::filesystem::path& base_dir) {
  if (!entry.is_string()) return entry;
  const std::filesystem::path p = base_dir / entry.get<std::string>();
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

gad::PowerCurve curve_from_json(const nlohmann::json& j) {
  const auto& c = j.contains("power_curve") ? j.at("power_curve") : j;
  gad::PowerCurve pc;
  pc.u = c.at("u").get<std::vector<double>>();
  pc.cp = c.at("cp").get<std::vector<double>>();
  pc.cut_in = c.value("cut_in", pc.cut_in);
  pc.cut_out = c.value("cut_out", pc.cut_out);
  gad::validate(pc);
  return pc;
}

}  // namespace

FarmLayout layout_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    FarmLayout l;
    for (const auto& [name, entry] : j.at("rotors").items()) l.rotors[name] = gad::rotor_from_json(resolve(entry, base_dir));
    if (j.contains("curves")) {
      for (const auto& [name, entry] : j.at("curves").items()) l.curves[name] = curve_from_json(resolve(entry, base_dir));
    }
    const std::string default_rotor = l.rotors.size() == 1 ? l.rotors.begin()->first : std::string();
    for (const auto& t : j.at("turbines")) {
      Turbine tb;
      tb.id = t.at("id").get<std::string>();
      tb.x = t.at("x").get<double>();
      tb.y = t.at("y").get<double>();
      tb.rotor = t.value("rotor", default_rotor);
      tb.curve = t.value("curve", std::string());
      tb.row = t.value("row", std::string());
      if (t.contains("yaw_deg")) tb.yaw_deg = t.at("yaw_deg").get<double>();
      l.turbines.push_back(std::move(tb));
    }
    validate(l);
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("layout: ") + e.what());
  }
}

FarmLayout load_layout_file(const std::filesystem::path& path) {
  const nlohmann::json j = resolve(nlohmann::json(path.filename().string()), path.parent_path());
  return layout_from_json(j, path.parent_path());
}

}  // namespace wakegnn::farm
