#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "wakegnn/common/error.hpp"
#include "wakegnn/farm/farm.hpp"
#include "wakegnn/farm/kdtree.hpp"
#include "wakegnn/farm/layout.hpp"
#include "wakegnn/farm/rotor_average.hpp"
#include "wakegnn/farm/superposition.hpp"
#include "wakegnn/gad/rotor.hpp"
#include "wakegnn/meshgraph/mesh.hpp"

using namespace wakegnn;
using namespace wakegnn::farm;

namespace {

FarmLayout line_layout(std::vector<double> xs, std::vector<double> ys = {}) {
  FarmLayout l;
  l.rotors["r"] = gad::default_rotor();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Turbine t;
    t.id = "T" + std::to_string(i);
    t.x = xs[i];
    t.y = ys.empty() ? 0.0 : ys[i];
    t.rotor = "r";
    l.turbines.push_back(t);
  }
  return l;
}

AnalyticWakeProvider analytic() {
  return AnalyticWakeProvider(synth::wake_rotor(gad::default_rotor()), {});
}

std::shared_ptr<const mesh::Graph> box_graph() {
  static auto g = std::make_shared<const mesh::Graph>([] {
    mesh::MeshSpec s;
    s.box_min = {-50, -100, 0};
    s.box_max = {50, 100, 150};
    s.base_spacing = 10.0;
    s.jitter = 0.3;
    return mesh::build_graded_mesh(s, 2);
  }());
  return g;
}

}  // namespace

TEST(Superposition, Examples) {
  const std::vector<WakeContribution> two{{8.0, 10.0}, {9.0, 10.0}};
  EXPECT_NEAR(sos_superpose(10.0, two), 10.0 * (1 - std::sqrt(0.05)), 1e-12);
  EXPECT_NEAR(sos_superpose(10.0, two), 7.764, 5e-4);
  EXPECT_EQ(sos_superpose(10.0, {}), 10.0);
  const std::vector<WakeContribution> one{{6.5, 10.0}};
  for (auto m : {Superposition::Sos, Superposition::Linear, Superposition::Max})
    EXPECT_NEAR(superpose(m, 10.0, one), 6.5, 1e-12);
  const std::vector<WakeContribution> zero{{7.0, 7.0}, {9.0, 9.0}};
  for (auto m : {Superposition::Sos, Superposition::Linear, Superposition::Max})
    EXPECT_EQ(superpose(m, 10.0, zero), 10.0);

  const double d = 0.2;
  const std::vector<WakeContribution> equal{{8.0, 10.0}, {4.0, 5.0}};
  EXPECT_NEAR(1 - linear_superpose(1.0, equal), 2 * d, 1e-12);
  EXPECT_NEAR(1 - sos_superpose(1.0, equal), std::sqrt(2.0) * d, 1e-12);
  EXPECT_NEAR(1 - max_deficit_superpose(1.0, equal), d, 1e-12);

  const std::vector<WakeContribution> deep{{1.0, 10.0}, {2.0, 10.0}};
  EXPECT_EQ(linear_superpose(10.0, deep), 0.0);
  EXPECT_EQ(sos_superpose(10.0, std::vector<WakeContribution>{{0.0, 10.0}, {0.0, 10.0}}), 0.0);
}

TEST(Superposition, OrderingAndPermutation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.0, 0.5), inlet(4.0, 12.0);
  std::uniform_int_distribution<int> count(0, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<WakeContribution> w(count(rng));
    for (auto& c : w) {
      c.u_inlet = inlet(rng);
      c.u_wake = c.u_inlet * (1 - d(rng));
    }
    const double lin = linear_superpose(9.0, w), sos = sos_superpose(9.0, w), mx = max_deficit_superpose(9.0, w);
    EXPECT_LE(lin, sos + 1e-12);
    EXPECT_LE(sos, mx + 1e-12);
    auto shuffled = w;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_NEAR(sos_superpose(9.0, shuffled), sos, 1e-12);
    EXPECT_NEAR(linear_superpose(9.0, shuffled), lin, 1e-12);
    EXPECT_EQ(max_deficit_superpose(9.0, shuffled), mx);
  }
}

TEST(Superposition, InvalidInputs) {
  EXPECT_THROW(wake_deficit({11.0, 10.0}), ParameterError);
  EXPECT_THROW(wake_deficit({-1.0, 10.0}), ParameterError);
  EXPECT_THROW(wake_deficit({5.0, 0.0}), ParameterError);
  EXPECT_THROW(superposition_from_string("mean"), UsageError);
}

TEST(KdTree, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Vec3> pts(700);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  pts.push_back(pts[5]);  // duplicate point, tie broken by index
  const KdTree tree(pts);
  for (int q = 0; q < 200; ++q) {
    const Vec3 x = q == 0 ? pts[5] : Vec3{u(rng), u(rng), u(rng)};
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
      const Vec3 d = pts[i] - x;
      all.push_back({d.x * d.x + d.y * d.y + d.z * d.z, i});
    }
    std::sort(all.begin(), all.end());
    const auto hits = tree.nearest(x, 8);
    ASSERT_EQ(hits.size(), 8u);
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_EQ(hits[k].index, all[k].second);
      EXPECT_EQ(hits[k].dist2, all[k].first);
    }
  }
  EXPECT_EQ(KdTree(std::span(pts).first(3)).nearest({0, 0, 0}, 8).size(), 3u);
}

TEST(RotorAverage, PointPattern) {
  const auto p = rotor_points({1, 2, 3}, 10.0);
  EXPECT_EQ(p[0], (Vec3{1, 2, 3}));
  for (std::size_t i = 1; i < kRotorPoints; ++i) {
    const double r = std::hypot(p[i].y - 2, p[i].z - 3);
    EXPECT_EQ(p[i].x, 1.0);
    EXPECT_NEAR(r, i <= 10 ? 5.0 : 9.0, 1e-12);
  }
}

TEST(RotorAverage, UniformShearAndDomain) {
  const auto g = box_graph();
  const FieldSampler sampler(g);
  const Vec3 hub{0, 0, 70};
  std::vector<double> uniform(g->n_vertices(), 7.25), shear(g->n_vertices());
  for (std::size_t i = 0; i < shear.size(); ++i) shear[i] = 5.0 + 0.04 * g->positions()[i].z;
  EXPECT_NEAR(rotor_averaged_velocity(sampler, uniform, hub, 40.0), 7.25, 1e-12);
  const double at_hub = 5.0 + 0.04 * 70;
  EXPECT_NEAR(rotor_averaged_velocity(sampler, shear, hub, 40.0), at_hub, 0.01 * at_hub);
  EXPECT_NEAR(rotor_averaged_velocity(sampler, shear, hub, 40.0, Averaging::Hub), at_hub, 0.01 * at_hub);
  EXPECT_THROW(rotor_averaged_velocity(sampler, uniform, {200, 0, 70}, 40.0), DomainError);
  EXPECT_THROW(rotor_averaged_velocity(sampler, uniform, {0, 0, 130}, 40.0), DomainError);
}

TEST(FarmPower, SingleTurbineUsesFreeStream) {
  const auto l = line_layout({0.0});
  const auto r = farm_power(l, analytic(), {8.0, 0.06, 0.0});
  ASSERT_EQ(r.turbines.size(), 1u);
  const auto& rot = l.rotors.at("r");
  EXPECT_EQ(r.turbines[0].u, 8.0);
  EXPECT_EQ(r.turbines[0].power, gad::power_from_curve(rot.power_curve, 8.0, rot.radius, rot.rho));
  EXPECT_EQ(r.turbines[0].n_wakes, 0u);
}

TEST(FarmPower, AlignedPairAndFirstRowInvariance) {
  const double D = gad::default_rotor().diameter();
  const auto l = line_layout({5 * D, 0.0});  // deliberately listed downstream first
  const mesh::GlobalConditions c{9.0, 0.08, 0.0};
  double first = -1;
  for (auto m : {Superposition::Sos, Superposition::Linear, Superposition::Max}) {
    const auto r = farm_power(l, analytic(), c, {m, Averaging::Rotor});
    EXPECT_EQ(r.turbines[0].id, "T0");
    EXPECT_LT(r.turbines[0].power, r.turbines[1].power);
    EXPECT_EQ(r.turbines[0].n_wakes, 1u);
    if (first < 0) first = r.turbines[1].power;
    EXPECT_EQ(r.turbines[1].power, first);
  }
}

TEST(FarmPower, UpstreamYawRaisesDownstreamSpeed) {
  const double D = gad::default_rotor().diameter();
  auto l = line_layout({0.0, 5 * D});
  const mesh::GlobalConditions c{8.0, 0.06, 0.0};
  const double straight = farm_power(l, analytic(), c).turbines[1].u;
  l.turbines[0].yaw_deg = 20.0;
  const auto yawed = farm_power(l, analytic(), c);
  EXPECT_GT(yawed.turbines[1].u, straight);
}

TEST(FarmPower, RowsAreIndependent) {
  auto l = line_layout({0.0, 400.0, 200.0, 600.0}, {0.0, 0.0, 30.0, 30.0});
  l.turbines[0].row = l.turbines[1].row = "A";
  l.turbines[2].row = l.turbines[3].row = "B";
  const mesh::GlobalConditions c{8.0, 0.06, 0.0};
  const auto r = farm_power(l, analytic(), c);
  EXPECT_EQ(r.turbines[0].n_wakes, 0u);
  EXPECT_EQ(r.turbines[1].n_wakes, 1u);
  EXPECT_EQ(r.turbines[2].n_wakes, 0u);
  EXPECT_EQ(r.turbines[3].n_wakes, 1u);
  auto only_b = l;
  only_b.turbines.erase(only_b.turbines.begin(), only_b.turbines.begin() + 2);
  EXPECT_EQ(farm_power(only_b, analytic(), c).turbines[1].power, r.turbines[3].power);
}

TEST(FarmPower, BundledLayout) {
  const auto l = load_layout_file(std::string(WAKEGNN_DATA_DIR) + "/lillgrund_layout.json");
  ASSERT_EQ(l.turbines.size(), 48u);
  std::set<std::string> rows;
  for (const auto& t : l.turbines) rows.insert(t.row);
  EXPECT_EQ(rows.size(), 8u);
  const auto r = farm_power(l, analytic(), {8.0, 0.06, 0.0});
  for (const auto& t : r.turbines) {
    EXPECT_GT(t.power, 0.0);
    EXPECT_TRUE(std::isfinite(t.u));
  }
}

TEST(Layout, Validation) {
  auto l = line_layout({0.0, 50.0});
  EXPECT_THROW(validate(l), ConfigError);
  l = line_layout({0.0, 500.0});
  l.turbines[1].id = "T0";
  EXPECT_THROW(validate(l), ConfigError);
  l = line_layout({0.0, 500.0});
  l.turbines[1].rotor = "missing";
  EXPECT_THROW(validate(l), ConfigError);
}
