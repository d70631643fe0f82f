#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wakegnn/common/error.hpp"
#include "wakegnn/gad/bem.hpp"
#include "wakegnn/gad/polar.hpp"
#include "wakegnn/gad/power_curve.hpp"
#include "wakegnn/gad/rotor.hpp"

using namespace wakegnn;
using namespace wakegnn::gad;
using std::numbers::pi;

namespace {

AirfoilPolar two_by_two() {
  AirfoilPolar p;
  p.alpha = {0.0, 10.0 * pi / 180};
  p.reynolds = {1e5, 1e6};
  p.cl = {{0.0, 1.0}, {0.2, 1.4}};
  p.cd = {{0.01, 0.03}, {0.005, 0.02}};
  return p;
}

// Annulus [r0, r1] split into n equal cells of thickness t, sources from f(r) at the midpoints.
template <typename Fn, typename Gn>
std::vector<DiskCell> annulus(double r0, double r1, double t, int n, Fn sn, Gn st) {
  std::vector<DiskCell> cells;
  const double dr = (r1 - r0) / n;
  for (int i = 0; i < n; ++i) {
    const double a = r0 + i * dr, b = a + dr, m = 0.5 * (a + b);
    cells.push_back({pi * (b * b - a * a) * t, m, sn(m), st(m)});
  }
  return cells;
}

}  // namespace

TEST(InflowAngle, Examples) {
  EXPECT_EQ(inflow_angle(2.0, 3.0, 6.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(inflow_angle(1.0, 2.0, 0.0, 2.0), pi / 4);
  EXPECT_DOUBLE_EQ(attack_angle(0.6, 0.2, 0.1), 0.3);
  EXPECT_THROW(inflow_angle(1.0, 2.0, 2.0, 0.0), NumericalError);
}

TEST(ElementForces, IndependentHandEvaluation) {
  const double phi = 30.0 * pi / 180;
  const auto f = element_forces(0.1, 0.1, 1.225, 10.0, phi, {1.0, 0.1});
  EXPECT_NEAR(f.lift, 0.6125, 1e-12);
  EXPECT_NEAR(f.drag, 0.06125, 1e-12);
  EXPECT_NEAR(f.normal, 0.5611, 5e-5);
  EXPECT_NEAR(f.tangential, 0.2532, 5e-5);
}

TEST(ElementForces, NoDragAndZeroSpeed) {
  const auto f = element_forces(0.3, 0.2, 1.2, 7.0, 0.4, {0.9, 0.0});
  EXPECT_EQ(f.tangential, f.lift * std::sin(0.4));
  const auto z = element_forces(0.3, 0.2, 1.2, 0.0, 0.4, {0.9, 0.05});
  EXPECT_EQ(z.lift, 0.0);
  EXPECT_EQ(z.normal, 0.0);
  EXPECT_EQ(z.tangential, 0.0);

  // Full overload: no relative flow gives zero forces rather than an undefined angle.
  const BladeElement e{10.0, 1.0, 2.0, 0.1, 0.0};
  const auto w = element_forces(e, FlowSample{0.0, 0.0}, two_by_two(), 1.225, 0.0);
  EXPECT_EQ(w.normal, 0.0);
  EXPECT_EQ(w.tangential, 0.0);
}

TEST(ElementForces, ScalingLaws) {
  const ForceCoefficients c{0.8, 0.05};
  const auto base = element_forces(0.5, 0.2, 1.2, 6.0, 0.5, c);
  const auto fast = element_forces(0.5, 0.2, 1.2, 12.0, 0.5, c);
  const auto dense = element_forces(0.5, 0.2, 2.4, 6.0, 0.5, c);
  const auto wide = element_forces(1.5, 0.2, 1.2, 6.0, 0.5, c);
  const auto longer = element_forces(0.5, 0.6, 1.2, 6.0, 0.5, c);
  for (auto [k, f] : {std::pair{4.0, fast}, {2.0, dense}, {3.0, wide}, {3.0, longer}}) {
    EXPECT_NEAR(f.lift, k * base.lift, 1e-12 * f.lift);
    EXPECT_NEAR(f.drag, k * base.drag, 1e-12 * f.drag);
    EXPECT_NEAR(f.normal, k * base.normal, 1e-12 * std::abs(f.normal));
    EXPECT_NEAR(f.tangential, k * base.tangential, 1e-12 * std::abs(f.tangential));
  }
}

TEST(ElementForces, PolarLookupFromFlow) {
  const BladeElement e{20.0, 1.0, 2.0, 0.05, 0.02};
  const FlowSample flow{8.0, 0.0};
  const double omega = 1.5;
  const auto f = element_forces(e, flow, two_by_two(), 1.225, omega);
  const double phi = std::atan2(omega * 20.0, 8.0);
  EXPECT_DOUBLE_EQ(f.phi, phi);
  EXPECT_DOUBLE_EQ(f.alpha, phi - 0.07);
  EXPECT_TRUE(f.polar_clamped);  // alpha ~ 1.25 rad lies far beyond the 10 degree table
}

TEST(SourceTerms, BladeCountAndNacelleSign) {
  const auto f = element_forces(0.7, 0.3, 1.225, 9.0, 0.6, {1.1, 0.04});
  const auto s1 = source_terms(f, 1);
  const auto s3 = source_terms(f, 3);
  EXPECT_EQ(s1.normal.magnitude, f.normal);
  EXPECT_EQ(s1.normal.direction, SourceDirection::Normal);
  EXPECT_EQ(s1.tangential.direction, SourceDirection::Tangential);
  EXPECT_DOUBLE_EQ(s3.normal.magnitude, 3 * s1.normal.magnitude);
  EXPECT_DOUBLE_EQ(s3.tangential.magnitude, 3 * s1.tangential.magnitude);

  for (double phi : {0.0, 0.3, 0.9, pi / 2}) {
    const double u = 5.0, c = 2.0, dr = 0.5, rho = 1.225;
    const auto nf = source_terms(element_forces(c, dr, rho, u, phi, kNacelleCoefficients), 3);
    EXPECT_NEAR(nf.tangential.magnitude, -0.5 * rho * 3 * c * u * u * std::cos(phi) * dr, 1e-12);
    EXPECT_LE(nf.tangential.magnitude, 1e-15);
  }
}

TEST(RotorIntegrate, DecouplingAndPowerIdentity) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::vector<DiskCell> cells;
  for (int i = 0; i < 50; ++i) cells.push_back({u(rng), u(rng), u(rng), 0.0});
  const auto a = rotor_integrate(cells, 1.225, 1.7);
  EXPECT_EQ(a.torque, 0.0);
  EXPECT_EQ(a.power, 0.0);
  EXPECT_GT(a.thrust, 0.0);

  for (int trial = 0; trial < 100; ++trial) {
    for (auto& c : cells) c.s_theta = u(rng) - 2.5;
    const double omega = u(rng);
    const auto r = rotor_integrate(cells, 1.225, omega);
    EXPECT_EQ(r.power, omega * r.torque);
  }
  EXPECT_THROW(rotor_integrate({}, 1.225, 1.0), ConfigError);
  cells[3].volume = 0.0;
  EXPECT_THROW(rotor_integrate(cells, 1.225, 1.0), ConfigError);
}

TEST(RotorIntegrate, ConstantAnnulusClosedForm) {
  const double r0 = 4.65, r1 = 46.5, t = 2.0, rho = 1.225, sn = 3.0, st = 0.8;
  const double thrust = rho * sn * pi * (r1 * r1 - r0 * r0) * t;
  const double torque = rho * st * t * 2 * pi / 3 * (r1 * r1 * r1 - r0 * r0 * r0);
  for (int n : {10, 1000}) {
    const auto cells = annulus(r0, r1, t, n, [&](double) { return sn; }, [&](double) { return st; });
    const auto r = rotor_integrate(cells, rho, 1.0);
    EXPECT_NEAR(r.thrust / thrust, 1.0, 0.01) << n;
    EXPECT_NEAR(r.torque / torque, 1.0, 0.01) << n;
  }
}

TEST(RotorIntegrate, PolynomialProfileConverges) {
  // S_theta = 1 + r/R + (r/R)^2 over the disk; Q = rho t 2 pi int r^2 S dr.
  const double R = 46.5, t = 1.0;
  auto s = [&](double r) { return 1 + r / R + (r / R) * (r / R); };
  const double exact = 2 * pi * t * (R * R * R / 3 + R * R * R / 4 + R * R * R / 5);
  double prev = INFINITY;
  for (int n : {8, 16, 32, 64, 128}) {
    const auto r = rotor_integrate(annulus(0.0, R, t, n, s, s), 1.0, 1.0);
    const double err = std::abs(r.torque - exact);
    EXPECT_LT(err, 0.6 * prev) << n;
    prev = err;
  }
}

TEST(PowerCurve, Examples) {
  PowerCurve flat{{3.0, 25.0}, {0.45, 0.45}, 3.0, 25.0};
  EXPECT_NEAR(power_from_curve(flat, 8.0, 46.5, 1.225), 9.586e5, 9.586e5 * 1e-3);
  EXPECT_EQ(power_from_curve(flat, 2.9, 46.5, 1.225), 0.0);
  EXPECT_EQ(power_from_curve(flat, 25.1, 46.5, 1.225), 0.0);
  EXPECT_THROW(power_from_curve(flat, -1.0, 46.5, 1.225), ParameterError);
  PowerCurve two{{6.0, 8.0}, {0.4, 0.5}, 3.0, 25.0};
  EXPECT_DOUBLE_EQ(interpolate_cp(two, 7.0), 0.45);
  PowerCurve bad{{6.0, 8.0}, {0.4, 0.6}, 3.0, 25.0};
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(PowerCurve, BundledCurveRisesBelowRated) {
  const auto rotor = load_rotor_file(std::string(WAKEGNN_DATA_DIR) + "/rotor_swt93_upscaled.json");
  double prev = 0.0;
  for (double u = rotor.power_curve.cut_in; u <= 13.0; u += 0.25) {
    const double p = power_from_curve(rotor.power_curve, u, rotor.radius, rotor.rho);
    EXPECT_GE(p, prev) << u;
    prev = p;
  }
}

TEST(AblTke, Examples) {
  EXPECT_EQ(abl_reference_tke(8.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(abl_reference_tke(10.0, 0.1), 1.5);
  EXPECT_DOUBLE_EQ(abl_reference_tke(14.0, 0.07), 4 * abl_reference_tke(7.0, 0.07));
}

TEST(Polar, InterpolationAndClamp) {
  const auto p = two_by_two();
  const auto at = interpolate_polar(p, p.alpha[1], 1e6);
  EXPECT_EQ(at.coefficients.cl, 1.4);
  EXPECT_EQ(at.coefficients.cd, 0.02);
  EXPECT_FALSE(at.out_of_range);
  EXPECT_DOUBLE_EQ(interpolate_polar(p, 5.0 * pi / 180, 1e5).coefficients.cl, 0.5);
  const auto hi = interpolate_polar(p, 0.5, 1e5);
  EXPECT_TRUE(hi.out_of_range);
  EXPECT_EQ(hi.coefficients.cl, 1.0);
  EXPECT_THROW(interpolate_polar(AirfoilPolar{}, 0.0, 1e5), ConfigError);
}

TEST(Rotor, BundledFileLoadsAndProducesLoads) {
  const auto r = load_rotor_file(std::string(WAKEGNN_DATA_DIR) + "/rotor_swt93_upscaled.json");
  EXPECT_EQ(r.radius, 46.5);
  EXPECT_EQ(r.hub_height, 65.0);
  EXPECT_EQ(r.n_blades, 3);
  ASSERT_TRUE(r.nacelle.has_value());
  const auto rep = uniform_inflow_loads(r, 8.0);
  EXPECT_GT(rep.loads.thrust, 0.0);
  EXPECT_EQ(rep.loads.power, r.rotor_speed(8.0) * rep.loads.torque);
  // Round trip through the JSON representation.
  const auto back = rotor_from_json(rotor_to_json(r));
  EXPECT_EQ(back.elements.size(), r.elements.size());
  EXPECT_NEAR(back.elements[3].twist, r.elements[3].twist, 1e-15);
}

TEST(Rotor, ElementsMustTileTheDisk) {
  auto r = load_rotor_file(std::string(WAKEGNN_DATA_DIR) + "/rotor_swt93_upscaled.json");
  r.elements.erase(r.elements.begin() + 4);
  EXPECT_THROW(validate(r), ConfigError);
}
