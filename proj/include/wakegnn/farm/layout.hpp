#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wakegnn/gad/rotor.hpp"

namespace wakegnn::farm {

struct Turbine {
  std::string id;
  double x = 0.0;  // m, +x along the dominant wind
  double y = 0.0;  // m
  std::string rotor;               // key into FarmLayout::rotors
  std::string curve;               // key into FarmLayout::curves; empty = the rotor's own curve
  std::string row;                 // empty = no row; rows do not interact when set
  std::optional<double> yaw_deg;   // overrides the farm-wide yaw
};

struct FarmLayout {
  std::vector<Turbine> turbines;
  std::map<std::string, gad::RotorSpec> rotors;
  std::map<std::string, gad::PowerCurve> curves;

  const gad::RotorSpec& rotor(const Turbine& t) const;
  const gad::PowerCurve& curve(const Turbine& t) const;
};

/// Unique ids, resolvable references, and no two turbines closer than one
/// rotor diameter (the larger of the pair). Throws ConfigError.
void validate(const FarmLayout& l);

/// Layout document. "rotors" and "curves" map names to inline objects or to
/// file paths resolved against `base_dir`.
FarmLayout layout_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
FarmLayout load_layout_file(const std::filesystem::path& path);

}  // namespace wakegnn::farm
