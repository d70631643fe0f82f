#include "wakegnn/meshgraph/mgf.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "wakegnn/common/binary_io.hpp"
#include "wakegnn/common/error.hpp"

namespace wakegnn::mesh {

namespace {

constexpr char kMagic[4] = {'M', 'G', 'F', '1'};

}  // namespace

void write_mgf(const std::filesystem::path& path, const MgfFile& file) {
  const Graph& g = file.graph;
  const std::size_t n = g.n_vertices();
  io::ByteWriter w;
  w.put_bytes(kMagic, 4);
  w.put<std::uint32_t>(kMgfVersion);
  w.put<std::uint64_t>(n);
  w.put<std::uint64_t>(g.n_directed_edges());
  for (const Vec3& p : g.positions()) {
    w.put(p.x);
    w.put(p.y);
    w.put(p.z);
  }
  for (BoundaryTag t : g.boundary_tags()) w.put(static_cast<std::uint8_t>(t));
  for (const Edge e : g.edges()) {
    w.put<std::uint64_t>(e.src);
    w.put<std::uint64_t>(e.dst);
  }
  w.put<std::uint32_t>(static_cast<std::uint32_t>(file.fields.size()));
  for (const FieldBlock& b : file.fields) {
    if (b.name.size() > kFieldNameBytes || b.name.empty()) {
      throw ConfigError("field block name '" + b.name + "' must be 1..32 bytes");
    }
    if (b.values.size() != n) {
      throw DimensionError("field block '" + b.name + "' has " + std::to_string(b.values.size()) +
                           " values for " + std::to_string(n) + " vertices");
    }
    char name[kFieldNameBytes] = {};
    std::memcpy(name, b.name.data(), b.name.size());
    w.put_bytes(name, kFieldNameBytes);
    w.put_array(b.values.data(), n);
  }
  if (file.conditions) {
    w.put(file.conditions->u_inf);
    w.put(file.conditions->ti_inf);
    w.put(file.conditions->yaw_deg);
  }
  io::write_file_bytes(path, w.bytes());
}

MgfFile read_mgf(const std::filesystem::path& path) {
  io::ByteReader r(io::read_file_bytes(path));
  const unsigned char* magic = r.take(4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(FormatErrorKind::BadMagic, "magic", "'" + path.string() + "' is not an MGF1 file");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kMgfVersion) {
    throw FormatError(FormatErrorKind::BadVersion, "version", "unsupported MGF version " + std::to_string(version));
  }
  const auto n = r.get<std::uint64_t>("header");
  const auto n_edges = r.get<std::uint64_t>("header");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError(FormatErrorKind::Malformed, "header", "vertex count too large");
  }
  // Cheap sanity bound before allocating.
  if (n > r.remaining() / 24) {
    throw FormatError(FormatErrorKind::Truncated, "coordinates", "truncated file: block 'coordinates' is incomplete");
  }

  std::vector<double> xyz(3 * n);
  r.get_array(xyz.data(), xyz.size(), "coordinates");
  std::vector<Vec3> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};

  std::vector<std::uint8_t> codes(n);
  r.get_array(codes.data(), n, "boundary_tags");
  std::vector<BoundaryTag> tags(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto t = boundary_tag_from_code(codes[i]);
    if (!t) {
      throw FormatError(FormatErrorKind::Malformed, "boundary_tags",
                        "unknown boundary tag code " + std::to_string(codes[i]));
    }
    tags[i] = *t;
  }

  if (n_edges > r.remaining() / 16) {
    throw FormatError(FormatErrorKind::Truncated, "edges", "truncated file: block 'edges' is incomplete");
  }
  std::vector<std::uint64_t> pairs(2 * n_edges);
  r.get_array(pairs.data(), pairs.size(), "edges");
  std::vector<Edge> edges(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    if (pairs[2 * i] >= n || pairs[2 * i + 1] >= n) {
      throw FormatError(FormatErrorKind::Malformed, "edges", "edge endpoint out of range");
    }
    edges[i] = {static_cast<std::uint32_t>(pairs[2 * i]), static_cast<std::uint32_t>(pairs[2 * i + 1])};
  }

  MgfFile file;
  try {
    file.graph = Graph::from_directed_edges(std::move(positions), std::move(tags), std::move(edges));
  } catch (const StructuralError& e) {
    throw FormatError(FormatErrorKind::Malformed, "edges", e.what());
  }

  const auto n_blocks = r.get<std::uint32_t>("field_count");
  for (std::uint32_t b = 0; b < n_blocks; ++b) {
    const std::string label = "field[" + std::to_string(b) + "]";
    const unsigned char* raw = r.take(kFieldNameBytes, label);
    const auto* end = std::find(raw, raw + kFieldNameBytes, '\0');
    FieldBlock block;
    block.name.assign(raw, end);
    block.values.resize(n);
    r.get_array(block.values.data(), n, "field:" + block.name);
    file.fields.push_back(std::move(block));
  }

  if (r.remaining() > 0) {
    if (r.remaining() < 3 * sizeof(double)) {
      throw FormatError(FormatErrorKind::Truncated, "conditions", "truncated file: block 'conditions' is incomplete");
    }
    GlobalConditions c;
    c.u_inf = r.get<double>("conditions");
    c.ti_inf = r.get<double>("conditions");
    c.yaw_deg = r.get<double>("conditions");
    file.conditions = c;
    if (r.remaining() != 0) {
      throw FormatError(FormatErrorKind::Malformed, "trailer", "unexpected trailing bytes after conditions block");
    }
  }
  return file;
}

void write_graph(const std::filesystem::path& path, const Graph& g) { write_mgf(path, MgfFile{g, {}, std::nullopt}); }

Graph read_graph(const std::filesystem::path& path) { return std::move(read_mgf(path).graph); }

std::vector<FieldBlock> snapshot_blocks(const FieldSnapshot& f) {
  return {{"u", f.u}, {"v", f.v}, {"w", f.w}, {"tke", f.tke}};
}

FieldSnapshot snapshot_from_blocks(const std::vector<FieldBlock>& blocks) {
  auto find = [&](const char* name) -> const std::vector<double>& {
    for (const auto& b : blocks) {
      if (b.name == name) return b.values;
    }
    throw FormatError(FormatErrorKind::Malformed, std::string("field:") + name,
                      std::string("missing field block '") + name + "'");
  };
  return {find("u"), find("v"), find("w"), find("tke")};
}

void write_sample(const std::filesystem::path& path, const Sample& s) {
  if (!s.graph) throw ConfigError("write_sample: sample has no graph");
  validate(s.fields, s.graph->n_vertices());
  write_mgf(path, MgfFile{*s.graph, snapshot_blocks(s.fields), s.conditions});
}

Sample read_sample(const std::filesystem::path& path) {
  MgfFile file = read_mgf(path);
  if (!file.conditions) {
    throw FormatError(FormatErrorKind::Malformed, "conditions", "'" + path.string() + "' has no conditions block");
  }
  Sample s;
  s.fields = snapshot_from_blocks(file.fields);
  s.conditions = *file.conditions;
  s.graph = std::make_shared<const Graph>(std::move(file.graph));
  return s;
}

}  // namespace wakegnn::mesh
