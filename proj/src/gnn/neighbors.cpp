#include "wakegnn/gnn/neighbors.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::gnn {

NeighborLists full_neighbors(const mesh::Graph& g) { return g.csr(); }

NeighborLists with_self_loops(const NeighborLists& nbrs) {
  const std::size_t n = n_vertices(nbrs);
  NeighborLists out;
  out.offsets.resize(n + 1);
  out.indices.reserve(nbrs.indices.size() + n);
  out.offsets[0] = 0;
  for (std::size_t v = 0; v < n; ++v) {
    out.indices.push_back(static_cast<std::uint32_t>(v));
    out.indices.insert(out.indices.end(), nbrs.indices.begin() + static_cast<std::ptrdiff_t>(nbrs.offsets[v]),
                       nbrs.indices.begin() + static_cast<std::ptrdiff_t>(nbrs.offsets[v + 1]));
    out.offsets[v + 1] = out.indices.size();
  }
  return out;
}

std::vector<NeighborLists> neighbor_sample(const mesh::Graph& g, std::span<const int> fanout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NeighborLists> layers;
  layers.reserve(fanout.size());
  std::vector<std::uint32_t> pool;
  for (std::size_t layer = 0; layer < fanout.size(); ++layer) {
    if (fanout[layer] < 1) {
      throw ConfigError("neighbor_sample: fanout for layer " + std::to_string(layer) + " must be >= 1");
    }
    const auto k = static_cast<std::size_t>(fanout[layer]);
    NeighborLists out;
    out.offsets.resize(g.n_vertices() + 1);
    out.offsets[0] = 0;
    for (std::size_t v = 0; v < g.n_vertices(); ++v) {
      const auto nb = g.neighbors(v);
      if (nb.size() <= k) {
        out.indices.insert(out.indices.end(), nb.begin(), nb.end());
      } else {
        // Partial Fisher-Yates: the first k slots become a uniform sample.
        pool.assign(nb.begin(), nb.end());
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t span = pool.size() - i;
          const std::size_t j = i + static_cast<std::size_t>(rng() % span);
          std::swap(pool[i], pool[j]);
        }
        std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
        out.indices.insert(out.indices.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      }
      out.offsets[v + 1] = out.indices.size();
    }
    layers.push_back(std::move(out));
  }
  return layers;
}

}  // namespace wakegnn::gnn
