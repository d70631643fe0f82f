#include "wakegnn/meshgraph/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::mesh {

void validate(const MeshSpec& spec) {
  for (int a = 0; a < 3; ++a) {
    if (!(spec.box_max[a] > spec.box_min[a])) {
      throw ConfigError("mesh: box_max must exceed box_min on every axis");
    }
  }
  if (!(spec.base_spacing > 0.0)) throw ConfigError("mesh: base_spacing must be positive");
  if (!(spec.grading_ratio >= 1.0)) throw ConfigError("mesh: grading_ratio must be >= 1");
  if (!(spec.jitter >= 0.0 && spec.jitter < 1.0)) throw ConfigError("mesh: jitter must lie in [0, 1)");
  if (spec.refinement) {
    const auto& s = *spec.refinement;
    if (!(s.diameter > 0.0)) throw ConfigError("mesh: refinement diameter must be positive");
    if (!(s.spacing > 0.0 && s.spacing < spec.base_spacing)) {
      throw ConfigError("mesh: refined spacing must be positive and below the base spacing");
    }
    const double r = 0.5 * s.diameter;
    for (int a = 0; a < 3; ++a) {
      if (s.center[a] - r < spec.box_min[a] || s.center[a] + r > spec.box_max[a]) {
        throw ConfigError("mesh: refinement sphere does not lie inside the box");
      }
    }
  }
}

namespace {

std::vector<double> uniform_axis(double lo, double hi, double spacing) {
  const auto n = std::max<long>(1, std::lround((hi - lo) / spacing));
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / n;
  c.back() = hi;
  return c;
}

// Points from `start` (exclusive) towards `bound` with geometrically growing spacing.
std::vector<double> grade_outward(double start, double bound, double first_spacing, double base, double ratio) {
  std::vector<double> out;
  const double dir = bound > start ? 1.0 : -1.0;
  double prev = start;
  double s = std::min(first_spacing, base);
  while (true) {
    const double remaining = std::abs(bound - prev);
    if (remaining <= 0.0) break;
    if (remaining <= 1.5 * s) {
      out.push_back(bound);
      break;
    }
    prev += dir * s;
    out.push_back(prev);
    s = std::min(s * ratio, base);
  }
  return out;
}

}  // namespace

std::vector<double> axis_coordinates(const MeshSpec& spec, int axis) {
  const double lo = spec.box_min[axis];
  const double hi = spec.box_max[axis];
  if (!spec.refinement) return uniform_axis(lo, hi, spec.base_spacing);

  const auto& sphere = *spec.refinement;
  const double c = sphere.center[axis];
  const double r = 0.5 * sphere.diameter;
  const double h = sphere.spacing;
  const auto k_max = static_cast<long>(std::floor(r / h + 1e-9));

  std::vector<double> band;
  for (long k = -k_max; k <= k_max; ++k) band.push_back(c + static_cast<double>(k) * h);
  // A band edge sitting almost on the box face is snapped onto it.
  if (band.front() - lo < 0.5 * h) band.front() = lo;
  if (hi - band.back() < 0.5 * h) band.back() = hi;

  const double first = h * spec.grading_ratio;
  auto below = grade_outward(band.front(), lo, first, spec.base_spacing, spec.grading_ratio);
  auto above = grade_outward(band.back(), hi, first, spec.base_spacing, spec.grading_ratio);

  std::vector<double> coords(below.rbegin(), below.rend());
  coords.insert(coords.end(), band.begin(), band.end());
  coords.insert(coords.end(), above.begin(), above.end());
  return coords;
}

Graph build_graded_mesh(const MeshSpec& spec, std::uint64_t seed) {
  validate(spec);
  const std::array<std::vector<double>, 3> axes = {axis_coordinates(spec, 0), axis_coordinates(spec, 1),
                                                   axis_coordinates(spec, 2)};
  const std::size_t nx = axes[0].size();
  const std::size_t ny = axes[1].size();
  const std::size_t nz = axes[2].size();
  const double total = static_cast<double>(nx) * static_cast<double>(ny) * static_cast<double>(nz);
  if (total > static_cast<double>(spec.vertex_budget)) {
    throw BudgetExceededError("mesh: " + std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz) +
                              " lattice exceeds the vertex budget of " + std::to_string(spec.vertex_budget));
  }
  const std::size_t n = nx * ny * nz;
  auto index = [&](std::size_t i, std::size_t j, std::size_t k) {
    return static_cast<std::uint32_t>((k * ny + j) * nx + i);
  };
  // Half the smaller adjacent spacing: jitter never reorders lattice planes.
  auto half_gap = [&](int axis, std::size_t i) {
    const auto& c = axes[static_cast<std::size_t>(axis)];
    return 0.5 * std::min(c[i] - c[i - 1], c[i + 1] - c[i]);
  };

  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };

  std::vector<Vec3> positions(n);
  std::vector<BoundaryTag> tags(n);
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const auto v = index(i, j, k);
        Vec3 p{axes[0][i], axes[1][j], axes[2][k]};
        BoundaryTag tag = BoundaryTag::Interior;
        if (i == 0) tag = BoundaryTag::Inlet;
        else if (i == nx - 1) tag = BoundaryTag::Outlet;
        else if (k == 0) tag = BoundaryTag::Ground;
        else if (k == nz - 1) tag = BoundaryTag::Top;
        else if (j == 0 || j == ny - 1) tag = BoundaryTag::Lateral;
        if (tag == BoundaryTag::Interior && spec.jitter > 0.0) {
          p.x += spec.jitter * half_gap(0, i) * unit();
          p.y += spec.jitter * half_gap(1, j) * unit();
          p.z += spec.jitter * half_gap(2, k) * unit();
        }
        positions[v] = p;
        tags[v] = tag;
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(3 * n);
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const auto v = index(i, j, k);
        if (i + 1 < nx) edges.push_back({v, index(i + 1, j, k)});
        if (j + 1 < ny) edges.push_back({v, index(i, j + 1, k)});
        if (k + 1 < nz) edges.push_back({v, index(i, j, k + 1)});
      }
    }
  }
  return mesh_to_graph(std::move(positions), edges, std::move(tags)).graph;
}

MeshSpec desk_mesh_spec(double rotor_diameter, double hub_height) {
  const double d = rotor_diameter;
  MeshSpec s;
  s.box_min = {-2.0 * d, -2.0 * d, 0.05 * hub_height};
  s.box_max = {10.0 * d, 2.0 * d, hub_height + 1.5 * d};
  s.base_spacing = 0.5 * d;
  s.refinement = RefinementSphere{{0.0, 0.0, hub_height}, d, 0.15 * d};
  s.grading_ratio = 1.5;
  s.jitter = 0.1;
  return s;
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }
Vec3 vec_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

void to_json(nlohmann::json& j, const MeshSpec& s) {
  j = {{"box_min", vec_json(s.box_min)},       {"box_max", vec_json(s.box_max)},
       {"base_spacing", s.base_spacing},       {"grading_ratio", s.grading_ratio},
       {"jitter", s.jitter},                   {"vertex_budget", s.vertex_budget}};
  if (s.refinement) {
    j["refinement"] = {{"center", vec_json(s.refinement->center)},
                       {"diameter", s.refinement->diameter},
                       {"spacing", s.refinement->spacing}};
  }
}

void from_json(const nlohmann::json& j, MeshSpec& s) {
  s = MeshSpec{};
  s.box_min = vec_from(j.at("box_min"));
  s.box_max = vec_from(j.at("box_max"));
  s.base_spacing = j.at("base_spacing").get<double>();
  s.grading_ratio = j.value("grading_ratio", s.grading_ratio);
  s.jitter = j.value("jitter", s.jitter);
  s.vertex_budget = j.value("vertex_budget", s.vertex_budget);
  if (j.contains("refinement") && !j.at("refinement").is_null()) {
    const auto& r = j.at("refinement");
    s.refinement = RefinementSphere{vec_from(r.at("center")), r.at("diameter").get<double>(),
                                    r.at("spacing").get<double>()};
  }
}

}  // namespace wakegnn::mesh
