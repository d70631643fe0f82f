#pragma once

#include <vector>

namespace wakegnn::gad {

inline constexpr double kBetzLimit = 16.0 / 27.0;

/// Power coefficient table. Outside [u.front(), u.back()] the end values are held.
struct PowerCurve {
  std::vector<double> u;   // m/s, strictly increasing
  std::vector<double> cp;  // dimensionless
  double cut_in = 3.0;
  double cut_out = 25.0;
};

void validate(const PowerCurve& c);

/// Linearly interpolated C_p at U (ignores cut-in/out).
double interpolate_cp(const PowerCurve& c, double u);

/// 0.5 rho C_p(U) pi R^2 U^3 between cut-in and cut-out, 0 elsewhere.
double power_from_curve(const PowerCurve& c, double u, double radius, double rho);

/// 1.5 I^2 U^2.
double abl_reference_tke(double u_hub, double i_hub);

}  // namespace wakegnn::gad
