#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "wakegnn/common/error.hpp"
#include "wakegnn/gad/power_curve.hpp"
#include "wakegnn/meshgraph/mesh.hpp"
#include "wakegnn/meshgraph/mgf.hpp"
#include "wakegnn/wakesynth/dataset_gen.hpp"
#include "wakegnn/wakesynth/wake.hpp"

using namespace wakegnn;
using namespace wakegnn::synth;
namespace fs = std::filesystem;

namespace {

const WakeRotor kRotor{93.0, 65.0};

// Straight transcription of the closed-form wake, valid where the radicand stays above the clamp.
WakePoint reference_wake(Vec3 p, const mesh::GlobalConditions& c, double kw, const WakeParams& w) {
  const double D = kRotor.diameter, zh = kRotor.hub_height;
  const double base = c.u_inf * std::pow(p.z / zh, w.shear);
  const double tke0 = 1.5 * std::pow(c.u_inf * c.ti_inf, 2);
  if (p.x <= 0) return {base, tke0, 0.0};
  const double g = c.yaw_deg * std::numbers::pi / 180;
  const double sigma = w.sigma0_over_d * D + kw * p.x;
  const double C = 1 - std::sqrt(1 - w.ct * std::cos(g) * std::cos(g) / (8 * std::pow(sigma / D, 2)));
  const double delta = w.k_def * std::sin(g) * p.x * D / (D + p.x);
  const double f = C * std::exp(-(std::pow(p.y - delta, 2) + std::pow(p.z - zh, 2)) / (2 * sigma * sigma));
  return {base * (1 - f), tke0 + w.k_i * f * c.u_inf * c.u_inf * c.ti_inf, f};
}

std::shared_ptr<const mesh::Graph> small_graph() {
  static auto g = std::make_shared<const mesh::Graph>([] {
    auto spec = mesh::desk_mesh_spec(93.0, 65.0);
    spec.base_spacing = 93.0;
    spec.refinement->spacing = 40.0;
    return mesh::build_graded_mesh(spec, 3);
  }());
  return g;
}

std::string bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Wake, UpstreamIsUndisturbed) {
  const mesh::GlobalConditions c{8.0, 0.1, 20.0};
  const auto w = evaluate_wake({-5 * 93.0, 0.0, 65.0}, c, kRotor, {});
  EXPECT_DOUBLE_EQ(w.u, 8.0);
  EXPECT_DOUBLE_EQ(w.tke, gad::abl_reference_tke(8.0, 0.1));
  EXPECT_EQ(w.deficit, 0.0);
}

TEST(Wake, CenterlineAtFiveDiameters) {
  WakeParams p;
  p.k_w = 0.05;  // sigma(5D) = 0.25D + 0.25D
  const auto w = evaluate_wake({5 * 93.0, 0.0, 65.0}, {8.0, 0.1, 0.0}, kRotor, p);
  EXPECT_NEAR(w.deficit, 1 - std::sqrt(0.6), 1e-12);
  EXPECT_NEAR(w.u / 8.0, 0.7746, 5e-5);
}

TEST(Wake, MatchesClosedFormOffCenter) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(3 * 93.0, 10 * 93.0), y(-150, 150), z(5, 200), yaw(-30, 30),
      ti(0.05, 0.15), u(5, 10);
  WakeParams p;
  for (int i = 0; i < 500; ++i) {
    const mesh::GlobalConditions c{u(rng), ti(rng), yaw(rng)};
    const Vec3 q{x(rng), y(rng), z(rng)};
    const auto got = evaluate_wake(q, c, kRotor, p);
    const auto want = reference_wake(q, c, p.growth_rate(c.ti_inf), p);
    EXPECT_NEAR(got.u, want.u, 1e-12 * want.u);
    EXPECT_NEAR(got.tke, want.tke, 1e-12 * want.tke);
  }
}

TEST(Wake, ZeroYawIsSymmetricInY) {
  const mesh::GlobalConditions c{7.0, 0.08, 0.0};
  for (double x : {50.0, 300.0, 800.0})
    for (double y : {10.0, 40.0, 120.0}) {
      const auto a = evaluate_wake({x, y, 70.0}, c, kRotor, {});
      const auto b = evaluate_wake({x, -y, 70.0}, c, kRotor, {});
      EXPECT_EQ(a.u, b.u);
      EXPECT_EQ(a.tke, b.tke);
    }
}

TEST(Wake, YawAntisymmetry) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(-100, 900), y(-200, 200), z(1, 150), yaw(-30, 30);
  for (int i = 0; i < 300; ++i) {
    const double g = yaw(rng);
    const Vec3 q{x(rng), y(rng), z(rng)};
    const auto a = evaluate_wake(q, {8.0, 0.1, g}, kRotor, {});
    const auto b = evaluate_wake({q.x, -q.y, q.z}, {8.0, 0.1, -g}, kRotor, {});
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.tke, b.tke);
  }
}

TEST(Wake, PositiveYawDeflectsTowardsPositiveY) {
  EXPECT_GT(wake_deflection(500.0, 20.0, kRotor, {}), 0.0);
  EXPECT_LT(wake_deflection(500.0, -20.0, kRotor, {}), 0.0);
  const mesh::GlobalConditions c{8.0, 0.1, 20.0};
  const double d = wake_deflection(500.0, 20.0, kRotor, {});
  EXPECT_LT(evaluate_wake({500.0, d, 65.0}, c, kRotor, {}).u, evaluate_wake({500.0, -d, 65.0}, c, kRotor, {}).u);
}

TEST(Wake, DeficitBoundsAndRecovery) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(0.5, 1000), y(-200, 200), z(1, 200);
  const mesh::GlobalConditions c{9.0, 0.05, 10.0};
  for (int i = 0; i < 1000; ++i) {
    const Vec3 q{x(rng), y(rng), z(rng)};
    const auto w = evaluate_wake(q, c, kRotor, {});
    const double base = 9.0 * std::pow(q.z / 65.0, 0.14);
    EXPECT_GE(w.deficit, 0.0);
    EXPECT_LE(w.deficit, 1.0);
    EXPECT_GE(w.u, 0.0);
    EXPECT_LE(w.u, base * (1 + 1e-15));
    EXPECT_GE(w.tke, gad::abl_reference_tke(9.0, 0.05));
  }
  double prev = 1.0;
  for (double x = 93.0; x <= 20 * 93.0; x += 31.0) {
    const double cl = centerline_deficit(x, {8.0, 0.1, 0.0}, kRotor, {});
    EXPECT_LE(cl, prev) << x;
    prev = cl;
  }
  double s = 0.0;
  for (double x = 1.0; x < 2000; x += 50) {
    EXPECT_GT(wake_sigma(x, 0.1, kRotor, {}), s);
    s = wake_sigma(x, 0.1, kRotor, {});
  }
}

TEST(Wake, NearWakeClampAndErrors) {
  WakeParams p;
  const mesh::GlobalConditions c{8.0, 0.1, 0.0};
  EXPECT_NO_THROW(evaluate_wake({5.0, 0.0, 65.0}, c, kRotor, p));
  p.near_wake_clamp = false;
  EXPECT_THROW(evaluate_wake({5.0, 0.0, 65.0}, c, kRotor, p), ParameterError);
  EXPECT_THROW(evaluate_wake({5.0, 0.0, 0.0}, c, kRotor, WakeParams{}), ParameterError);
  WakeParams bad;
  bad.ct = 1.2;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = {};
  bad.k_w = 0.0;
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(Dataset, DrawsStayInRangeAndRepeat) {
  ConditionRanges r;
  const auto a = draw_conditions(2000, r, 11);
  for (const auto& c : a) {
    EXPECT_GE(c.u_inf, r.u_min);
    EXPECT_LE(c.u_inf, r.u_max);
    EXPECT_GE(c.ti_inf, r.ti_min);
    EXPECT_LE(c.ti_inf, r.ti_max);
    EXPECT_GE(c.yaw_deg, r.yaw_min);
    EXPECT_LE(c.yaw_deg, r.yaw_max);
  }
  EXPECT_EQ(a, draw_conditions(2000, r, 11));
  EXPECT_NE(a, draw_conditions(2000, r, 12));
  r.u_min = 11.0;
  EXPECT_THROW(validate(r), ConfigError);
}

TEST(Dataset, SameSeedSameBytesAndRoundTrip) {
  const auto dir = fs::temp_directory_path() / "wakegnn_test_wakesynth";
  fs::remove_all(dir);
  const auto g = small_graph();
  const auto a = gen_dataset(g, 3, {}, kRotor, {}, 42, dir / "a");
  const auto b = gen_dataset(g, 3, {}, kRotor, {}, 42, dir / "b");
  ASSERT_EQ(a.samples.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(bytes_of(a.samples[i]), bytes_of(b.samples[i]));
  EXPECT_EQ(bytes_of(a.manifest), bytes_of(b.manifest));

  const auto mem = generate_samples(g, 3, {}, kRotor, {}, 42);
  const auto loaded = load_dataset(a.manifest);
  ASSERT_EQ(loaded.size(), 3u);
  EXPECT_EQ(loaded[0].graph.get(), loaded[2].graph.get());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(*loaded[i].graph, *g);
    EXPECT_EQ(loaded[i].conditions, mem[i].conditions);
    EXPECT_EQ(loaded[i].fields, mem[i].fields);
    const auto one = mesh::read_sample(a.samples[i]);
    EXPECT_EQ(one.fields, mem[i].fields);
  }
  fs::remove_all(dir);
}

TEST(Dataset, FieldsAgreeWithPointwiseWake) {
  const auto g = small_graph();
  const mesh::GlobalConditions c{6.5, 0.12, -15.0};
  const auto f = synth_wake_field(*g, c, kRotor, {});
  ASSERT_EQ(f.size(), g->n_vertices());
  for (std::size_t i = 0; i < g->n_vertices(); i += 7) {
    const auto w = evaluate_wake(g->positions()[i], c, kRotor, {});
    EXPECT_EQ(f.u[i], w.u);
    EXPECT_EQ(f.tke[i], w.tke);
    EXPECT_EQ(f.v[i], 0.0);
    EXPECT_EQ(f.w[i], 0.0);
  }
}
