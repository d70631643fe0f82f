#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wakegnn/meshgraph/sample.hpp"

namespace wakegnn::mesh {

/// Named per-vertex f64 array. Names are at most 32 bytes of ASCII.
struct FieldBlock {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const FieldBlock&, const FieldBlock&) = default;
};

/// Full contents of an "MGF1" file.
///
///   'M','G','F','1'  u32 version = 1
///   u64 n_vertices   u64 n_directed_edges
///   f64 x,y,z per vertex
///   u8 boundary tag per vertex
///   u64 src,dst per directed edge
///   u32 n_field_blocks, each = 32-byte zero-padded name + f64[n_vertices]
///   optional conditions block: f64 u_inf, ti_inf, yaw_deg (sample files)
///
/// All values little-endian.
struct MgfFile {
  Graph graph;
  std::vector<FieldBlock> fields;
  std::optional<GlobalConditions> conditions;

  friend bool operator==(const MgfFile&, const MgfFile&) = default;
};

inline constexpr std::uint32_t kMgfVersion = 1;
inline constexpr std::size_t kFieldNameBytes = 32;

void write_mgf(const std::filesystem::path& path, const MgfFile& file);
MgfFile read_mgf(const std::filesystem::path& path);

void write_graph(const std::filesystem::path& path, const Graph& g);
Graph read_graph(const std::filesystem::path& path);

/// Sample bundle: graph, the four blocks "u","v","w","tke" and a conditions block.
void write_sample(const std::filesystem::path& path, const Sample& s);
Sample read_sample(const std::filesystem::path& path);

/// Field blocks "u","v","w","tke" of a snapshot, in that order.
std::vector<FieldBlock> snapshot_blocks(const FieldSnapshot& f);
/// Collects "u","v","w","tke" from a block list; throws FormatError if any is missing.
FieldSnapshot snapshot_from_blocks(const std::vector<FieldBlock>& blocks);

}  // namespace wakegnn::mesh
