#pragma once

#include <vector>

namespace wakegnn::gad {

/// Lift/drag table over (angle of attack [rad], Reynolds number).
/// `cl[i][j]`, `cd[i][j]` hold the value at reynolds[i], alpha[j].
struct AirfoilPolar {
  std::vector<double> alpha;
  std::vector<double> reynolds;
  std::vector<std::vector<double>> cl;
  std::vector<std::vector<double>> cd;
};

/// Throws ConfigError for an empty or inconsistent table, a non-increasing grid or C_D < 0.
void validate(const AirfoilPolar& p);

struct ForceCoefficients {
  double cl = 0.0;
  double cd = 0.0;
};

struct PolarLookup {
  ForceCoefficients coefficients;
  bool out_of_range = false;  // query was clamped onto the table boundary
};

/// Bilinear in (alpha, Re); queries outside the table are clamped and flagged.
PolarLookup interpolate_polar(const AirfoilPolar& polar, double alpha, double reynolds);

}  // namespace wakegnn::gad
