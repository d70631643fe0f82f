#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "wakegnn/meshgraph/graph.hpp"

namespace wakegnn::mesh {

/// Inflow conditions shared by every vertex of one sample.
struct GlobalConditions {
  double u_inf = 8.0;    // hub-height inflow speed, m/s
  double ti_inf = 0.1;   // turbulence intensity, fraction
  double yaw_deg = 0.0;  // turbine yaw, degrees; positive deflects the wake towards +y

  friend bool operator==(const GlobalConditions&, const GlobalConditions&) = default;
};

void validate(const GlobalConditions& c);

/// Per-vertex flow state: velocity components (m/s) and turbulent kinetic energy (m^2/s^2).
struct FieldSnapshot {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> tke;

  std::size_t size() const { return u.size(); }
  static FieldSnapshot zeros(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n),
                                                      std::vector<double>(n), std::vector<double>(n)}; }
  double speed(std::size_t i) const;

  friend bool operator==(const FieldSnapshot&, const FieldSnapshot&) = default;
};

/// Checks array lengths against `n_vertices` and tke >= 0.
void validate(const FieldSnapshot& f, std::size_t n_vertices);

struct Sample {
  std::shared_ptr<const Graph> graph;
  GlobalConditions conditions;
  FieldSnapshot fields;
};

void to_json(nlohmann::json& j, const GlobalConditions& c);
void from_json(const nlohmann::json& j, GlobalConditions& c);

}  // namespace wakegnn::mesh
