#pragma once

#include <optional>

#include <json.hpp>

#include "wakegnn/common/vec3.hpp"
#include "wakegnn/gad/rotor.hpp"
#include "wakegnn/meshgraph/graph.hpp"
#include "wakegnn/meshgraph/sample.hpp"

namespace wakegnn::synth {

/// Constants of the analytic Gaussian wake.
struct WakeParams {
  double ct = 0.8;                // thrust coefficient
  std::optional<double> k_w;      // wake growth rate; unset means 0.035 + 0.35 I
  double sigma0_over_d = 0.25;    // initial wake width / D
  double k_def = 0.3;             // yaw deflection gain
  double k_i = 0.6;               // wake-added turbulence gain
  double shear = 0.14;            // power-law exponent of the inflow profile
  // Close behind the rotor C_T cos^2(yaw) / (8 (sigma/D)^2) exceeds 1 for the
  // default constants. With the clamp on, the radicand is floored at
  // `min_radicand`; with it off a negative radicand is a ParameterError.
  bool near_wake_clamp = true;
  double min_radicand = 0.04;

  double growth_rate(double ti_inf) const { return k_w ? *k_w : 0.035 + 0.35 * ti_inf; }
};

void validate(const WakeParams& p);

/// Rotor geometry the wake needs.
struct WakeRotor {
  double diameter = 93.0;
  double hub_height = 65.0;
};

inline WakeRotor wake_rotor(const gad::RotorSpec& r) { return {r.diameter(), r.hub_height}; }

struct WakePoint {
  double u = 0.0;
  double tke = 0.0;
  double deficit = 0.0;
};

/// Wake width sigma(x) in metres (x downstream of the rotor, metres).
double wake_sigma(double x, double ti_inf, const WakeRotor& rotor, const WakeParams& p);

/// Centreline deficit C(x).
double centerline_deficit(double x, const mesh::GlobalConditions& cond, const WakeRotor& rotor, const WakeParams& p);

/// Lateral centreline deflection delta(x) in metres.
double wake_deflection(double x, double yaw_deg, const WakeRotor& rotor, const WakeParams& p);

/// Field at a point (rotor at x = y = 0, z measured from the ground). Throws
/// ParameterError for z <= 0.
WakePoint evaluate_wake(const Vec3& p, const mesh::GlobalConditions& cond, const WakeRotor& rotor,
                        const WakeParams& params);

/// Evaluates the wake at every vertex; v = w = 0.
mesh::FieldSnapshot synth_wake_field(const mesh::Graph& g, const mesh::GlobalConditions& cond,
                                     const WakeRotor& rotor, const WakeParams& p);

void to_json(nlohmann::json& j, const WakeParams& p);
void from_json(const nlohmann::json& j, WakeParams& p);

}  // namespace wakegnn::synth
