#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "wakegnn/meshgraph/graph.hpp"

namespace wakegnn::mesh {

struct RefinementSphere {
  Vec3 center;
  double diameter = 0.0;
  double spacing = 0.0;  // lattice spacing inside the sphere
};

/// Box domain discretised by a graded hexahedral lattice.
struct MeshSpec {
  Vec3 box_min;
  Vec3 box_max;
  double base_spacing = 1.0;
  std::optional<RefinementSphere> refinement;
  double grading_ratio = 1.3;  // growth between consecutive spacings in the transition shell
  double jitter = 0.0;         // interior-vertex perturbation, fraction of half the local spacing
  std::size_t vertex_budget = 200'000;
};

void validate(const MeshSpec& spec);

/// Tensor-product lattice coordinates along one axis: refined spacing inside the
/// sphere's extent on that axis, geometric growth by `grading_ratio` through the
/// transition shell, base spacing beyond. The sphere centre is always a lattice plane.
std::vector<double> axis_coordinates(const MeshSpec& spec, int axis);

/// Builds the lattice graph. Edges connect lattice neighbours, tags come from
/// face membership (inlet/outlet on x, ground/top on z, lateral on y, in that
/// precedence), and interior points are jittered deterministically from `seed`.
Graph build_graded_mesh(const MeshSpec& spec, std::uint64_t seed);

/// Domain used for the desk-scale datasets: rotor at the origin, hub at
/// `hub_height`, 2D upstream, 10D downstream, +-2D laterally.
MeshSpec desk_mesh_spec(double rotor_diameter, double hub_height);

void to_json(nlohmann::json& j, const MeshSpec& s);
void from_json(const nlohmann::json& j, MeshSpec& s);

}  // namespace wakegnn::mesh
