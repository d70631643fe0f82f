#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wakegnn/meshgraph/graph.hpp"

namespace wakegnn::gnn {

/// Per-vertex neighbour lists in CSR form. Produced from a Graph (full
/// neighbourhoods) or by sampling; lists need not be symmetric after sampling.
using NeighborLists = mesh::Csr;

NeighborLists full_neighbors(const mesh::Graph& g);

/// Each list extended with the vertex itself (prepended).
NeighborLists with_self_loops(const NeighborLists& nbrs);

inline std::size_t n_vertices(const NeighborLists& nbrs) { return nbrs.offsets.size() - 1; }

/// For every layer and vertex, min(fanout[layer], degree) distinct neighbours
/// drawn without replacement and returned sorted. Deterministic per seed.
/// Throws ConfigError for a zero fanout.
std::vector<NeighborLists> neighbor_sample(const mesh::Graph& g, std::span<const int> fanout, std::uint64_t seed);

}  // namespace wakegnn::gnn
