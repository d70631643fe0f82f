#include "wakegnn/gad/power_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wakegnn/common/error.hpp"

namespace wakegnn::gad {

void validate(const PowerCurve& c) {
  if (c.u.empty() || c.u.size() != c.cp.size()) throw ConfigError("power curve: U and C_p tables must be non-empty and equal length");
  for (std::size_t i = 1; i < c.u.size(); ++i) {
    if (!(c.u[i] > c.u[i - 1])) throw ConfigError("power curve: U must be strictly increasing");
  }
  for (double cp : c.cp) {
    if (!(cp >= 0.0 && cp < kBetzLimit)) throw ConfigError("power curve: C_p outside [0, 16/27)");
  }
  if (!(c.cut_in >= 0.0 && c.cut_out > c.cut_in)) throw ConfigError("power curve: need 0 <= cut_in < cut_out");
}

double interpolate_cp(const PowerCurve& c, double u) {
  if (c.u.empty()) throw ConfigError("power curve: empty table");
  if (u <= c.u.front()) return c.cp.front();
  if (u >= c.u.back()) return c.cp.back();
  const auto it = std::upper_bound(c.u.begin(), c.u.end(), u);
  const auto hi = static_cast<std::size_t>(it - c.u.begin());
  const std::size_t lo = hi - 1;
  const double t = (u - c.u[lo]) / (c.u[hi] - c.u[lo]);
  return c.cp[lo] + t * (c.cp[hi] - c.cp[lo]);
}

double power_from_curve(const PowerCurve& c, double u, double radius, double rho) {
  if (!(u >= 0.0)) throw ParameterError("power_from_curve: negative or non-finite wind speed");
  if (u < c.cut_in || u > c.cut_out) return 0.0;
  const double area = std::numbers::pi * radius * radius;
  return 0.5 * rho * interpolate_cp(c, u) * area * u * u * u;
}

double abl_reference_tke(double u_hub, double i_hub) {
  if (!(u_hub >= 0.0)) throw ParameterError("abl_reference_tke: negative wind speed");
  if (!(i_hub >= 0.0 && i_hub < 1.0)) throw ParameterError("abl_reference_tke: turbulence intensity outside [0, 1)");
  return 1.5 * i_hub * i_hub * u_hub * u_hub;
}

}  // namespace wakegnn::gad
