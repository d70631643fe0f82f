#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "wakegnn/meshgraph/mgf.hpp"

namespace wakegnn::mesh {

/// Legacy ASCII VTK unstructured grid: vertices as points, each undirected edge
/// as a VTK_LINE cell, field blocks and boundary tags as point scalars.
void write_vtk(const std::filesystem::path& path, const Graph& g, const std::vector<FieldBlock>& fields);

/// Vertex indices with |position[axis] - value| <= half_thickness.
std::vector<std::uint32_t> slice_vertices(const Graph& g, int axis, double value, double half_thickness);

/// Slice as a VTK point cloud (VTK_VERTEX cells) carrying the given fields.
void write_vtk_slice(const std::filesystem::path& path, const Graph& g, const std::vector<FieldBlock>& fields,
                     const std::vector<std::uint32_t>& vertices);

/// Headered CSV: x,y,z,tag,<field names...>, one row per vertex (or per listed vertex).
void write_fields_csv(const std::filesystem::path& path, const Graph& g, const std::vector<FieldBlock>& fields,
                      const std::optional<std::vector<std::uint32_t>>& vertices = std::nullopt);

}  // namespace wakegnn::mesh
