#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "wakegnn/gad/bem.hpp"
#include "wakegnn/gad/polar.hpp"
#include "wakegnn/gad/power_curve.hpp"

namespace wakegnn::gad {

/// Rotor geometry and operating point. Exactly one of `omega` and `tsr` is set.
struct RotorSpec {
  double radius = 46.5;
  double hub_height = 65.0;
  int n_blades = 3;
  std::optional<double> omega;  // rad/s
  std::optional<double> tsr;    // omega R / U
  double rho = 1.225;
  std::vector<BladeElement> elements;   // sorted by r
  std::optional<BladeElement> nacelle;  // covers [0, first element) with C_L = 0, C_D = 1
  AirfoilPolar polar;
  PowerCurve power_curve;

  double diameter() const { return 2.0 * radius; }
  /// Rotor speed at inflow U; from `omega` if fixed, else TSR U / R.
  double rotor_speed(double u_inf) const;
};

/// Checks blade count, radius, element tiling of (0, R], polar and power curve.
void validate(const RotorSpec& r);

/// Default rotor: no blade table, only the radius/hub geometry and the bundled power curve shape.
RotorSpec default_rotor();

struct RotorLoadsReport {
  RotorLoads loads;
  int clamped_elements = 0;
};

/// Uniform axial inflow, no induction: per-element sources integrated over annuli
/// of volume 2 pi r dr * thickness.
RotorLoadsReport uniform_inflow_loads(const RotorSpec& r, double u_inf, double thickness = 1.0);

/// Rotor file (JSON). Angles are stored in degrees.
RotorSpec rotor_from_json(const nlohmann::json& j);
nlohmann::json rotor_to_json(const RotorSpec& r);
RotorSpec load_rotor_file(const std::filesystem::path& path);

}  // namespace wakegnn::gad
