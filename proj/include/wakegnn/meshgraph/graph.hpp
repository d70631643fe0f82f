#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wakegnn/common/vec3.hpp"

namespace wakegnn::mesh {

/// Vertex boundary category. The numeric value is both the on-disk code and the
/// one-hot column index.
enum class BoundaryTag : std::uint8_t {
  Inlet = 0,
  Outlet = 1,
  Lateral = 2,
  Ground = 3,
  Top = 4,
  Interior = 5,
};

inline constexpr std::size_t kBoundaryTagCount = 6;

std::string_view to_string(BoundaryTag tag);
std::optional<BoundaryTag> boundary_tag_from_code(std::uint8_t code);

struct Edge {
  std::uint32_t src;
  std::uint32_t dst;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Compressed sparse row adjacency: neighbors of v are
/// `indices[offsets[v] .. offsets[v+1])`, sorted ascending.
struct Csr {
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint32_t> indices;

  friend bool operator==(const Csr&, const Csr&) = default;
};

/// Immutable mesh graph. Every undirected mesh edge is stored once per
/// direction, the edge list is sorted lexicographically, and there are no
/// self-loops or duplicates. Construct through `Graph::from_directed_edges`
/// or `mesh_to_graph`.
class Graph {
 public:
  Graph() = default;

  /// Validates every invariant (range, symmetry, ordering, no self-loops or
  /// duplicates) and builds the CSR. Throws StructuralError on violation.
  static Graph from_directed_edges(std::vector<Vec3> positions, std::vector<BoundaryTag> tags,
                                   std::vector<Edge> edges);

  std::size_t n_vertices() const { return positions_.size(); }
  std::size_t n_directed_edges() const { return edges_.size(); }

  const std::vector<Vec3>& positions() const { return positions_; }
  const std::vector<BoundaryTag>& boundary_tags() const { return tags_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Csr& csr() const { return csr_; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {csr_.indices.data() + csr_.offsets[v], csr_.indices.data() + csr_.offsets[v + 1]};
  }
  std::size_t degree(std::size_t v) const { return csr_.offsets[v + 1] - csr_.offsets[v]; }

  /// Axis-aligned bounding box of the vertex positions.
  std::array<Vec3, 2> bounds() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Vec3> positions_;
  std::vector<BoundaryTag> tags_;
  std::vector<Edge> edges_;
  Csr csr_;
};

struct MeshToGraphResult {
  Graph graph;
  std::size_t self_loops_stripped = 0;
};

/// Converts undirected element edges to a Graph: self-loops are stripped (and
/// counted), duplicate undirected edges collapse, and each survivor is stored in
/// both directions. Out-of-range indices throw StructuralError.
MeshToGraphResult mesh_to_graph(std::vector<Vec3> points, std::span<const Edge> element_edges,
                                std::vector<BoundaryTag> boundary_tags);

}  // namespace wakegnn::mesh
