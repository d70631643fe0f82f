#include "wakegnn/meshgraph/vtk.hpp"

#include <cmath>
#include <fstream>

#include "wakegnn/common/error.hpp"

namespace wakegnn::mesh {

namespace {

std::ofstream open_text(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out.precision(17);
  return out;
}

void check_fields(const std::vector<FieldBlock>& fields, std::size_t n) {
  for (const auto& f : fields) {
    if (f.values.size() != n) throw DimensionError("field '" + f.name + "' does not match the vertex count");
  }
}

void write_point_data(std::ofstream& out, const Graph& g, const std::vector<FieldBlock>& fields,
                      const std::vector<std::uint32_t>& ids) {
  out << "POINT_DATA " << ids.size() << "\n";
  out << "SCALARS boundary_tag int 1\nLOOKUP_TABLE default\n";
  for (auto v : ids) out << static_cast<int>(g.boundary_tags()[v]) << "\n";
  for (const auto& f : fields) {
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (auto v : ids) out << f.values[v] << "\n";
  }
}

}  // namespace

void write_vtk(const std::filesystem::path& path, const Graph& g, const std::vector<FieldBlock>& fields) {
  check_fields(fields, g.n_vertices());
  auto out = open_text(path);
  out << "# vtk DataFile Version 3.0\nwakegnn mesh graph\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << g.n_vertices() << " double\n";
  for (const auto& p : g.positions()) out << p.x << " " << p.y << " " << p.z << "\n";
  std::size_t n_lines = 0;
  for (const auto e : g.edges()) n_lines += e.src < e.dst ? 1 : 0;
  out << "CELLS " << n_lines << " " << 3 * n_lines << "\n";
  for (const auto e : g.edges()) {
    if (e.src < e.dst) out << "2 " << e.src << " " << e.dst << "\n";
  }
  out << "CELL_TYPES " << n_lines << "\n";
  for (std::size_t i = 0; i < n_lines; ++i) out << "3\n";
  std::vector<std::uint32_t> all(g.n_vertices());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  write_point_data(out, g, fields, all);
}

std::vector<std::uint32_t> slice_vertices(const Graph& g, int axis, double value, double half_thickness) {
  if (axis < 0 || axis > 2) throw ConfigError("slice axis must be 0, 1 or 2");
  std::vector<std::uint32_t> ids;
  for (std::size_t i = 0; i < g.n_vertices(); ++i) {
    if (std::abs(g.positions()[i][axis] - value) <= half_thickness) ids.push_back(static_cast<std::uint32_t>(i));
  }
  return ids;
}

void write_vtk_slice(const std::filesystem::path& path, const Graph& g, const std::vector<FieldBlock>& fields,
                     const std::vector<std::uint32_t>& vertices) {
  check_fields(fields, g.n_vertices());
  auto out = open_text(path);
  out << "# vtk DataFile Version 3.0\nwakegnn slice\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << vertices.size() << " double\n";
  for (auto v : vertices) {
    const auto& p = g.positions()[v];
    out << p.x << " " << p.y << " " << p.z << "\n";
  }
  out << "CELLS " << vertices.size() << " " << 2 * vertices.size() << "\n";
  for (std::size_t i = 0; i < vertices.size(); ++i) out << "1 " << i << "\n";
  out << "CELL_TYPES " << vertices.size() << "\n";
  for (std::size_t i = 0; i < vertices.size(); ++i) out << "1\n";
  write_point_data(out, g, fields, vertices);
}

void write_fields_csv(const std::filesystem::path& path, const Graph& g, const std::vector<FieldBlock>& fields,
                      const std::optional<std::vector<std::uint32_t>>& vertices) {
  check_fields(fields, g.n_vertices());
  auto out = open_text(path);
  out << "x,y,z,tag";
  for (const auto& f : fields) out << "," << f.name;
  out << "\n";
  auto row = [&](std::size_t v) {
    const auto& p = g.positions()[v];
    out << p.x << "," << p.y << "," << p.z << "," << to_string(g.boundary_tags()[v]);
    for (const auto& f : fields) out << "," << f.values[v];
    out << "\n";
  };
  if (vertices) {
    for (auto v : *vertices) row(v);
  } else {
    for (std::size_t v = 0; v < g.n_vertices(); ++v) row(v);
  }
}

}  // namespace wakegnn::mesh
