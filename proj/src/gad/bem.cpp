#include "wakegnn/gad/bem.hpp"

#include <cmath>

#include "wakegnn/common/error.hpp"

namespace wakegnn::gad {

void validate(const BladeElement& e, double radius) {
  if (!(e.r >= 0.0 && e.r <= radius * (1.0 + 1e-12))) throw ConfigError("blade element: r outside [0, R]");
  if (!(e.dr > 0.0)) throw ConfigError("blade element: dr must be positive");
  if (!(e.chord > 0.0)) throw ConfigError("blade element: chord must be positive");
  if (!std::isfinite(e.twist) || !std::isfinite(e.pitch)) throw ConfigError("blade element: non-finite angle");
}

double inflow_angle(double omega, double r, double u_theta, double u_n) {
  const double tangential = omega * r - u_theta;
  if (!std::isfinite(tangential) || !std::isfinite(u_n)) throw NumericalError("inflow_angle: non-finite input");
  if (tangential == 0.0 && u_n == 0.0) throw NumericalError("inflow_angle: undefined for zero relative velocity");
  return std::atan2(tangential, u_n);
}

double relative_speed(double omega, double r, double u_theta, double u_n) {
  return std::hypot(u_n, omega * r - u_theta);
}

ElementForces element_forces(double chord, double dr, double rho, double u_rel, double phi, ForceCoefficients c) {
  for (double v : {chord, dr, rho, u_rel, phi, c.cl, c.cd}) {
    if (!std::isfinite(v)) throw NumericalError("element_forces: non-finite input");
  }
  const double q = 0.5 * rho * chord * u_rel * u_rel * dr;
  ElementForces f;
  f.lift = q * c.cl;
  f.drag = q * c.cd;
  const double cs = std::cos(phi);
  const double sn = std::sin(phi);
  f.normal = f.lift * cs + f.drag * sn;
  f.tangential = f.lift * sn - f.drag * cs;
  f.phi = phi;
  return f;
}

ElementForces element_forces(const BladeElement& e, const FlowSample& flow, const AirfoilPolar& polar, double rho,
                             double omega, double kinematic_viscosity) {
  const double u_rel = relative_speed(omega, e.r, flow.u_theta, flow.u_n);
  if (u_rel == 0.0) {
    ElementForces zero;
    return zero;
  }
  const double phi = inflow_angle(omega, e.r, flow.u_theta, flow.u_n);
  const double alpha = attack_angle(phi, e.twist, e.pitch);
  const PolarLookup lookup = interpolate_polar(polar, alpha, u_rel * e.chord / kinematic_viscosity);
  ElementForces f = element_forces(e.chord, e.dr, rho, u_rel, phi, lookup.coefficients);
  f.alpha = alpha;
  f.polar_clamped = lookup.out_of_range;
  return f;
}

SourceTerms source_terms(const ElementForces& f, int n_blades) {
  if (n_blades < 1) throw ConfigError("source_terms: blade count must be at least 1");
  SourceTerms s;
  s.normal.magnitude = n_blades * f.normal;
  s.tangential.magnitude = n_blades * f.tangential;
  return s;
}

RotorLoads rotor_integrate(std::span<const DiskCell> cells, double rho, double omega) {
  if (cells.empty()) throw ConfigError("rotor_integrate: empty cell list");
  RotorLoads loads;
  for (const DiskCell& c : cells) {
    if (!(c.volume > 0.0)) throw ConfigError("rotor_integrate: cell volume must be positive");
    const double m = rho * c.volume;
    loads.thrust += m * c.s_n;
    loads.torque += m * c.radius * c.s_theta;
  }
  loads.power = omega * loads.torque;
  return loads;
}

}  // namespace wakegnn::gad
