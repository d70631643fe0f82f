#pragma once

#include <span>

#include "wakegnn/gad/polar.hpp"

namespace wakegnn::gad {

struct BladeElement {
  double r = 0.0;      // radial position, m
  double dr = 0.0;     // span, m
  double chord = 0.0;  // m
  double twist = 0.0;  // rad
  double pitch = 0.0;  // rad
};

void validate(const BladeElement& e, double radius);

/// Velocity seen by an element in the rotor frame.
struct FlowSample {
  double u_n = 0.0;      // normal (axial) velocity, m/s
  double u_theta = 0.0;  // tangential velocity, m/s
};

/// Flow inclination angle phi = atan2(omega r - U_theta, U_n).
/// Throws NumericalError when both arguments vanish.
double inflow_angle(double omega, double r, double u_theta, double u_n);

/// Angle of attack alpha = phi - twist - pitch.
inline double attack_angle(double phi, double twist, double pitch) { return phi - twist - pitch; }

/// Relative speed |U_rel| = sqrt(U_n^2 + (omega r - U_theta)^2).
double relative_speed(double omega, double r, double u_theta, double u_n);

struct ElementForces {
  double lift = 0.0;        // dF_L
  double drag = 0.0;        // dF_D
  double normal = 0.0;      // dF_n
  double tangential = 0.0;  // dF_theta
  double phi = 0.0;
  double alpha = 0.0;
  bool polar_clamped = false;
};

/// Element forces from known relative speed, inflow angle and coefficients.
ElementForces element_forces(double chord, double dr, double rho, double u_rel, double phi, ForceCoefficients c);

/// Element forces with the inflow angle, attack angle and coefficients derived
/// from the flow, the rotor speed and the polar.
ElementForces element_forces(const BladeElement& e, const FlowSample& flow, const AirfoilPolar& polar, double rho,
                             double omega, double kinematic_viscosity = 1.5e-5);

enum class SourceDirection { Normal, Tangential };

/// Source magnitude along a rotor-frame unit vector.
struct DirectedSource {
  double magnitude = 0.0;
  SourceDirection direction = SourceDirection::Normal;
};

struct SourceTerms {
  DirectedSource normal{0.0, SourceDirection::Normal};
  DirectedSource tangential{0.0, SourceDirection::Tangential};
};

/// S_n = N dF_n along v_n, S_theta = N dF_theta along v_theta.
SourceTerms source_terms(const ElementForces& f, int n_blades);

/// Nacelle treated as an element with C_D = 1 and C_L = 0.
inline constexpr ForceCoefficients kNacelleCoefficients{0.0, 1.0};

struct DiskCell {
  double volume = 0.0;  // V_i, m^3
  double radius = 0.0;  // r_i, m
  double s_n = 0.0;
  double s_theta = 0.0;
};

struct RotorLoads {
  double thrust = 0.0;  // T = sum rho V S_n
  double torque = 0.0;  // Q = sum rho V r S_theta
  double power = 0.0;   // P = sum rho V r omega S_theta
};

/// Throws ConfigError for an empty cell list or a non-positive cell volume.
RotorLoads rotor_integrate(std::span<const DiskCell> cells, double rho, double omega);

}  // namespace wakegnn::gad
