#include "wakegnn/farm/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::farm {

std::string_view to_string(Superposition m) {
  switch (m) {
    case Superposition::Sos: return "sos";
    case Superposition::Linear: return "linear";
    case Superposition::Max: return "max";
  }
  return "?";
}

Superposition superposition_from_string(std::string_view s) {
  if (s == "sos") return Superposition::Sos;
  if (s == "linear") return Superposition::Linear;
  if (s == "max") return Superposition::Max;
  throw UsageError("unknown superposition method '" + std::string(s) + "' (expected sos, linear or max)");
}

double wake_deficit(const WakeContribution& c) {
  if (!(c.u_inlet > 0.0)) throw ParameterError("superposition: wake inflow velocity must be positive");
  const double d = 1.0 - c.u_wake / c.u_inlet;
  if (!(d >= 0.0 && d <= 1.0)) throw ParameterError("superposition: wake deficit " + std::to_string(d) + " outside [0, 1]");
  return d;
}

namespace {

void check_inflow(double u_inf) {
  if (!(u_inf >= 0.0) || !std::isfinite(u_inf)) throw ParameterError("superposition: free-stream velocity must be finite and non-negative");
}

}  // namespace

double sos_superpose(double u_inf, std::span<const WakeContribution> wakes) {
  check_inflow(u_inf);
  double sum_sq = 0.0;
  for (const auto& w : wakes) {
    const double d = wake_deficit(w);
    sum_sq += d * d;
  }
  return std::max(0.0, (1.0 - std::sqrt(sum_sq)) * u_inf);
}

double linear_superpose(double u_inf, std::span<const WakeContribution> wakes) {
  check_inflow(u_inf);
  double sum = 0.0;
  for (const auto& w : wakes) sum += wake_deficit(w);
  return std::max(0.0, (1.0 - sum) * u_inf);
}

double max_deficit_superpose(double u_inf, std::span<const WakeContribution> wakes) {
  check_inflow(u_inf);
  double largest = 0.0;
  for (const auto& w : wakes) largest = std::max(largest, wake_deficit(w));
  return std::max(0.0, (1.0 - largest) * u_inf);
}

double superpose(Superposition m, double u_inf, std::span<const WakeContribution> wakes) {
  switch (m) {
    case Superposition::Sos: return sos_superpose(u_inf, wakes);
    case Superposition::Linear: return linear_superpose(u_inf, wakes);
    case Superposition::Max: return max_deficit_superpose(u_inf, wakes);
  }
  throw UsageError("unknown superposition method");
}

}  // namespace wakegnn::farm
