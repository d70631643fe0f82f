#include "wakegnn/gad/polar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::gad {

void validate(const AirfoilPolar& p) {
  if (p.alpha.empty() || p.reynolds.empty()) throw ConfigError("polar: empty table");
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  if (!increasing(p.alpha)) throw ConfigError("polar: alpha grid must be strictly increasing");
  if (!increasing(p.reynolds)) throw ConfigError("polar: Reynolds grid must be strictly increasing");
  if (p.cl.size() != p.reynolds.size() || p.cd.size() != p.reynolds.size()) {
    throw ConfigError("polar: coefficient tables need one row per Reynolds number");
  }
  for (std::size_t i = 0; i < p.reynolds.size(); ++i) {
    if (p.cl[i].size() != p.alpha.size() || p.cd[i].size() != p.alpha.size()) {
      throw ConfigError("polar: coefficient rows need one entry per alpha");
    }
    for (double cd : p.cd[i]) {
      if (!(cd >= 0.0)) throw ConfigError("polar: drag coefficients must be non-negative");
    }
  }
}

namespace {

struct Bracket {
  std::size_t lo;
  std::size_t hi;
  double t;
  bool clamped;
};

Bracket bracket(const std::vector<double>& grid, double x) {
  if (grid.size() == 1) return {0, 0, 0.0, x != grid[0]};
  if (x <= grid.front()) return {0, 0, 0.0, x < grid.front()};
  if (x >= grid.back()) return {grid.size() - 1, grid.size() - 1, 0.0, x > grid.back()};
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  return {lo, hi, (x - grid[lo]) / (grid[hi] - grid[lo]), false};
}

double lerp(double a, double b, double t) { return t == 0.0 ? a : a + (b - a) * t; }

}  // namespace

PolarLookup interpolate_polar(const AirfoilPolar& polar, double alpha, double reynolds) {
  if (polar.alpha.empty() || polar.reynolds.empty()) throw ConfigError("polar: empty table");
  if (!std::isfinite(alpha) || !std::isfinite(reynolds)) throw NumericalError("polar: non-finite query");
  const Bracket a = bracket(polar.alpha, alpha);
  const Bracket r = bracket(polar.reynolds, reynolds);
  auto eval = [&](const std::vector<std::vector<double>>& table) {
    const double lo = lerp(table[r.lo][a.lo], table[r.lo][a.hi], a.t);
    const double hi = lerp(table[r.hi][a.lo], table[r.hi][a.hi], a.t);
    return lerp(lo, hi, r.t);
  };
  // A single-entry Reynolds grid carries no Re dependence, so it is never flagged.
  const bool re_clamped = polar.reynolds.size() > 1 && r.clamped;
  return {{eval(polar.cl), eval(polar.cd)}, a.clamped || re_clamped};
}

}  // namespace wakegnn::gad
