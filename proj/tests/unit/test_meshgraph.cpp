#include <algorithm>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wakegnn/common/error.hpp"
#include "wakegnn/meshgraph/features.hpp"
#include "wakegnn/meshgraph/mesh.hpp"
#include "wakegnn/meshgraph/mgf.hpp"
#include "wakegnn/meshgraph/vtk.hpp"

using namespace wakegnn;
using namespace wakegnn::mesh;
namespace fs = std::filesystem;

namespace {

MeshSpec unit_cube() {
  MeshSpec s;
  s.box_min = {0, 0, 0};
  s.box_max = {1, 1, 1};
  s.base_spacing = 1.0;
  return s;
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "wakegnn_test_meshgraph";
  fs::create_directories(dir);
  return dir / name;
}

// Brute-force checks of every Graph invariant.
void expect_graph_invariants(const Graph& g) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& e : g.edges()) {
    ASSERT_LT(e.src, g.n_vertices());
    ASSERT_LT(e.dst, g.n_vertices());
    ASSERT_NE(e.src, e.dst);
    ASSERT_TRUE(seen.emplace(e.src, e.dst).second);
  }
  for (auto [a, b] : seen) ASSERT_TRUE(seen.count({b, a}));
  const auto& csr = g.csr();
  ASSERT_EQ(csr.offsets.size(), g.n_vertices() + 1);
  ASSERT_EQ(csr.offsets.back(), g.n_directed_edges());
  for (std::size_t v = 0; v < g.n_vertices(); ++v) {
    ASSERT_LE(csr.offsets[v], csr.offsets[v + 1]);
    const auto nb = g.neighbors(v);
    ASSERT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    std::set<std::uint32_t> from_edges;
    for (auto [a, b] : seen)
      if (a == v) from_edges.insert(b);
    ASSERT_EQ(std::set<std::uint32_t>(nb.begin(), nb.end()), from_edges);
  }
}

}  // namespace

TEST(Mesh, UnitCubeHasEightVerticesAndTwelveEdges) {
  const auto g = build_graded_mesh(unit_cube(), 0);
  EXPECT_EQ(g.n_vertices(), 8u);
  EXPECT_EQ(g.n_directed_edges(), 24u);
  expect_graph_invariants(g);
}

TEST(Mesh, SingleCellHasNoInteriorVertices) {
  const auto g = build_graded_mesh(unit_cube(), 3);
  for (auto t : g.boundary_tags()) EXPECT_NE(t, BoundaryTag::Interior);
}

TEST(Mesh, RefinementAddsVertices) {
  auto spec = desk_mesh_spec(93.0, 65.0);
  const auto refined = build_graded_mesh(spec, 1);
  spec.refinement.reset();
  const auto plain = build_graded_mesh(spec, 1);
  EXPECT_GT(refined.n_vertices(), plain.n_vertices());
}

TEST(Mesh, DeskMeshInvariantsAndGrading) {
  const auto spec = desk_mesh_spec(93.0, 65.0);
  const auto g = build_graded_mesh(spec, 7);
  expect_graph_invariants(g);
  EXPECT_GT(g.n_vertices(), 4000u);
  EXPECT_LT(g.n_vertices(), 6000u);

  const auto& s = *spec.refinement;
  const double radius = s.diameter / 2;
  std::size_t inside = 0;
  double dist_sum = 0.0;
  std::size_t dist_n = 0;
  for (std::size_t v = 0; v < g.n_vertices(); ++v) {
    const Vec3 p = g.positions()[v];
    if (norm(p - s.center) > radius) continue;
    ++inside;
    double mean = 0.0;
    for (auto u : g.neighbors(v)) mean += norm(g.positions()[u] - p);
    mean /= double(g.degree(v));
    EXPECT_LE(mean, 1.5 * s.spacing) << "vertex " << v;
    dist_sum += mean;
    ++dist_n;
  }
  ASSERT_GT(inside, 0u);
  const Vec3 ext = spec.box_max - spec.box_min;
  const double density_sphere = double(inside) / (4.0 / 3.0 * M_PI * radius * radius * radius);
  const double density_all = double(g.n_vertices()) / (ext.x * ext.y * ext.z);
  EXPECT_GT(density_sphere, density_all);
}

TEST(Mesh, DeterministicPerSeed) {
  const auto spec = desk_mesh_spec(93.0, 65.0);
  EXPECT_EQ(build_graded_mesh(spec, 5), build_graded_mesh(spec, 5));
  EXPECT_NE(build_graded_mesh(spec, 5).positions(), build_graded_mesh(spec, 6).positions());
}

TEST(Mesh, RejectsSphereOutsideBox) {
  auto spec = unit_cube();
  spec.base_spacing = 0.5;
  spec.refinement = RefinementSphere{{5, 5, 5}, 0.5, 0.1};
  EXPECT_THROW(build_graded_mesh(spec, 0), ConfigError);
}

TEST(Mesh, RejectsBudgetOverrun) {
  auto spec = unit_cube();
  spec.base_spacing = 0.01;
  spec.vertex_budget = 1000;
  EXPECT_THROW(build_graded_mesh(spec, 0), BudgetExceededError);
}

TEST(MeshToGraph, SmallestGraph) {
  const std::vector<Edge> e{{0, 1}};
  const auto r = mesh_to_graph({{0, 0, 0}, {1, 0, 0}}, e, {BoundaryTag::Inlet, BoundaryTag::Outlet});
  EXPECT_EQ(r.graph.edges(), (std::vector<Edge>{{0, 1}, {1, 0}}));
  EXPECT_EQ(r.graph.csr().offsets, (std::vector<std::uint64_t>{0, 1, 2}));
}

TEST(MeshToGraph, CubeMatchesBruteForceSymmetrisation) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  std::vector<Edge> e;
  for (std::uint32_t a = 0; a < 8; ++a)
    for (std::uint32_t b = a + 1; b < 8; ++b)
      if (std::popcount(a ^ b) == 1) e.push_back({b, a});  // deliberately reversed
  ASSERT_EQ(e.size(), 12u);
  const auto g = mesh_to_graph(pts, e, std::vector<BoundaryTag>(8, BoundaryTag::Ground)).graph;
  std::set<std::pair<std::uint32_t, std::uint32_t>> expect;
  for (auto [a, b] : e) {
    expect.emplace(a, b);
    expect.emplace(b, a);
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> got;
  for (auto [a, b] : g.edges()) got.emplace(a, b);
  EXPECT_EQ(got, expect);
  EXPECT_EQ(g.n_directed_edges(), 24u);
}

TEST(MeshToGraph, DuplicatesCollapse) {
  const std::vector<Edge> e{{0, 1}, {0, 1}, {1, 0}};
  const auto g = mesh_to_graph({{0, 0, 0}, {1, 0, 0}}, e, {BoundaryTag::Interior, BoundaryTag::Interior}).graph;
  EXPECT_EQ(g.n_directed_edges(), 2u);
}

TEST(MeshToGraph, SelfLoopsStrippedAndCounted) {
  const std::vector<Edge> e{{0, 0}, {0, 1}, {1, 1}};
  const auto r = mesh_to_graph({{0, 0, 0}, {1, 0, 0}}, e, {BoundaryTag::Interior, BoundaryTag::Interior});
  EXPECT_EQ(r.self_loops_stripped, 2u);
  EXPECT_EQ(r.graph.n_directed_edges(), 2u);
}

TEST(MeshToGraph, OutOfRangeIndex) {
  const std::vector<Edge> e{{0, 2}};
  EXPECT_THROW(mesh_to_graph({{0, 0, 0}, {1, 0, 0}}, e, {BoundaryTag::Interior, BoundaryTag::Interior}),
               StructuralError);
}

TEST(Features, StandardisationOneHotAndGlobals) {
  const auto g = build_graded_mesh(unit_cube(), 0);
  NormalizationStats st;
  st.coord_mean = {g.positions()[3].x, g.positions()[3].y, g.positions()[3].z};
  st.coord_scale = {2.0, 3.0, 4.0};
  st.global_mean = {7.5, 0.1, 0.0};
  st.global_scale = {1.5, 0.03, 17.0};
  const GlobalConditions c{9.0, 0.12, 10.0};
  const auto f = assemble_features(g, c, st);
  ASSERT_EQ(f.rows(), 8);
  ASSERT_EQ(f.cols(), kFeatureCount);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(f(3, kCoordOffset + k), 0.0);
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    EXPECT_EQ(f.row(i).segment(kOneHotOffset, 6).sum(), 1.0);
    const auto tag = static_cast<int>(g.boundary_tags()[i]);
    EXPECT_EQ(f(i, kOneHotOffset + tag), 1.0);
    EXPECT_DOUBLE_EQ(f(i, kGlobalOffset + 0), (9.0 - 7.5) / 1.5);
  }
}

TEST(Features, InletVertexEncodesFirstColumn) {
  const std::vector<Edge> e{{0, 1}};
  const auto g = mesh_to_graph({{0, 0, 0}, {1, 0, 0}}, e, {BoundaryTag::Inlet, BoundaryTag::Top}).graph;
  const auto f = assemble_features(g, {}, {});
  EXPECT_EQ(f.row(0).segment(kOneHotOffset, 6), (Eigen::RowVectorXd(6) << 1, 0, 0, 0, 0, 0).finished());
  EXPECT_EQ(f.row(1).segment(kOneHotOffset, 6), (Eigen::RowVectorXd(6) << 0, 0, 0, 0, 1, 0).finished());
}

TEST(Features, GlobalsAreLocalisedAndPure) {
  const auto g = build_graded_mesh(desk_mesh_spec(93.0, 65.0), 2);
  NormalizationStats st;
  st.coord_scale = {300, 200, 100};
  const auto a = assemble_features(g, {6.0, 0.1, 5.0}, st);
  const auto b = assemble_features(g, {8.0, 0.1, 5.0}, st);
  EXPECT_EQ(a, assemble_features(g, {6.0, 0.1, 5.0}, st));
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (c == kGlobalOffset) EXPECT_NE(a.col(c), b.col(c));
    else EXPECT_EQ(a.col(c), b.col(c));
  }
}

TEST(Features, TargetsRoundTrip) {
  const auto g = build_graded_mesh(unit_cube(), 0);
  FieldSnapshot f = FieldSnapshot::zeros(8);
  for (int i = 0; i < 8; ++i) {
    f.u[i] = 7 + i;
    f.v[i] = 0.1 * i;
    f.w[i] = -0.2 * i;
    f.tke[i] = 0.3 + 0.05 * i;
  }
  NormalizationStats st;
  st.target_mean = {0.9, 0.0, 0.0, 2.0};
  st.target_scale = {0.1, 0.02, 0.02, 0.7};
  const GlobalConditions c{8.0, 0.1, 0.0};
  for (auto mode : {TargetMode::Physical, TargetMode::InflowRelative}) {
    st.target_mode = mode;
    const auto back = denormalize_targets(normalize_targets(f, c, st), c, st);
    for (int i = 0; i < 8; ++i) {
      EXPECT_NEAR(back.u[i], f.u[i], 1e-12);
      EXPECT_NEAR(back.tke[i], f.tke[i], 1e-12);
    }
  }
}

TEST(Mgf, CubeRoundTripIsBitExact) {
  const auto g = build_graded_mesh(unit_cube(), 0);
  const auto p = temp_file("cube.mgf");
  write_graph(p, g);
  EXPECT_EQ(read_graph(p), g);
}

TEST(Mgf, SampleRoundTrip) {
  auto g = std::make_shared<const Graph>(build_graded_mesh(unit_cube(), 0));
  Sample s{g, {7.25, 0.08, -12.5}, FieldSnapshot::zeros(8)};
  s.fields.u[3] = 1.0 / 3.0;
  s.fields.tke[7] = 0.5;
  const auto p = temp_file("sample.mgf");
  write_sample(p, s);
  const auto r = read_sample(p);
  EXPECT_EQ(*r.graph, *g);
  EXPECT_EQ(r.conditions, s.conditions);
  EXPECT_EQ(r.fields, s.fields);
}

TEST(Mgf, WrongMagic) {
  const auto p = temp_file("bad_magic.mgf");
  std::ofstream(p, std::ios::binary) << "XGF1 and more bytes that do not matter";
  try {
    read_mgf(p);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.format_kind(), FormatErrorKind::BadMagic);
  }
}

TEST(Mgf, TruncationNamesTheBlock) {
  auto g = std::make_shared<const Graph>(build_graded_mesh(unit_cube(), 0));
  const auto p = temp_file("trunc.mgf");
  write_sample(p, Sample{g, {}, FieldSnapshot::zeros(8)});
  const auto size = fs::file_size(p);
  // Cut inside the last field block ("tke"), before the conditions block.
  fs::resize_file(p, size - 3 * sizeof(double) - 4 * sizeof(double));
  try {
    read_mgf(p);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.format_kind(), FormatErrorKind::Truncated);
    EXPECT_EQ(e.block(), "field:tke");
  }
}

TEST(Vtk, WritesLinesAndSlices) {
  const auto g = build_graded_mesh(unit_cube(), 0);
  const std::vector<FieldBlock> blocks{{"speed", std::vector<double>(8, 2.0)}};
  const auto p = temp_file("cube.vtk");
  write_vtk(p, g, blocks);
  std::ifstream in(p);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(text.find("POINTS 8"), std::string::npos);
  EXPECT_NE(text.find("CELLS 12 36"), std::string::npos);
  EXPECT_NE(text.find("SCALARS speed"), std::string::npos);
  EXPECT_EQ(slice_vertices(g, 2, 0.0, 0.1).size(), 4u);
}
