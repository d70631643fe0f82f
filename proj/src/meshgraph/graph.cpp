#include "wakegnn/meshgraph/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::mesh {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Inlet: return "inlet";
    case BoundaryTag::Outlet: return "outlet";
    case BoundaryTag::Lateral: return "lateral";
    case BoundaryTag::Ground: return "ground";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Interior: return "interior";
  }
  return "unknown";
}

std::optional<BoundaryTag> boundary_tag_from_code(std::uint8_t code) {
  if (code >= kBoundaryTagCount) return std::nullopt;
  return static_cast<BoundaryTag>(code);
}

Graph Graph::from_directed_edges(std::vector<Vec3> positions, std::vector<BoundaryTag> tags,
                                 std::vector<Edge> edges) {
  const std::size_t n = positions.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw StructuralError("graph has too many vertices for 32-bit indices");
  }
  if (tags.size() != n) {
    throw StructuralError("boundary tag count " + std::to_string(tags.size()) + " != vertex count " +
                          std::to_string(n));
  }
  for (auto t : tags) {
    if (static_cast<std::size_t>(t) >= kBoundaryTagCount) {
      throw StructuralError("unknown boundary tag code " + std::to_string(static_cast<int>(t)));
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge e = edges[i];
    if (e.src >= n || e.dst >= n) {
      throw StructuralError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") references a vertex outside [0, " + std::to_string(n) + ")");
    }
    if (e.src == e.dst) {
      throw StructuralError("self-loop at vertex " + std::to_string(e.src));
    }
    if (i > 0 && !(edges[i - 1] < e)) {
      throw StructuralError("edge list must be strictly increasing (sorted, no duplicates)");
    }
  }
  for (const Edge e : edges) {
    if (!std::binary_search(edges.begin(), edges.end(), Edge{e.dst, e.src})) {
      throw StructuralError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") has no reverse edge");
    }
  }

  Graph g;
  g.csr_.offsets.assign(n + 1, 0);
  for (const Edge e : edges) g.csr_.offsets[e.src + 1] += 1;
  for (std::size_t v = 0; v < n; ++v) g.csr_.offsets[v + 1] += g.csr_.offsets[v];
  // Sorted edge list means the destinations are already grouped and ascending.
  g.csr_.indices.reserve(edges.size());
  for (const Edge e : edges) g.csr_.indices.push_back(e.dst);

  g.positions_ = std::move(positions);
  g.tags_ = std::move(tags);
  g.edges_ = std::move(edges);
  return g;
}

std::array<Vec3, 2> Graph::bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo{inf, inf, inf};
  Vec3 hi{-inf, -inf, -inf};
  for (const Vec3& p : positions_) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return {lo, hi};
}

MeshToGraphResult mesh_to_graph(std::vector<Vec3> points, std::span<const Edge> element_edges,
                                std::vector<BoundaryTag> boundary_tags) {
  const std::size_t n = points.size();
  MeshToGraphResult result;
  std::vector<Edge> directed;
  directed.reserve(2 * element_edges.size());
  for (const Edge e : element_edges) {
    if (e.src >= n || e.dst >= n) {
      throw StructuralError("element edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") references a point outside [0, " + std::to_string(n) + ")");
    }
    if (e.src == e.dst) {
      ++result.self_loops_stripped;
      continue;
    }
    directed.push_back({e.src, e.dst});
    directed.push_back({e.dst, e.src});
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  result.graph = Graph::from_directed_edges(std::move(points), std::move(boundary_tags), std::move(directed));
  return result;
}

}  // namespace wakegnn::mesh
