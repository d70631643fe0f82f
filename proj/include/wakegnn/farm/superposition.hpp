#pragma once

#include <span>
#include <string_view>

namespace wakegnn::farm {

enum class Superposition { Sos, Linear, Max };

std::string_view to_string(Superposition m);
/// Accepts "sos", "linear", "max"; throws UsageError otherwise.
Superposition superposition_from_string(std::string_view s);

/// Velocity U_ij of upstream turbine j's wake at turbine i, and j's inflow U_inf_j.
struct WakeContribution {
  double u_wake = 0.0;
  double u_inlet = 0.0;
};

/// 1 - U_ij / U_inf_j. Throws ParameterError for U_inf_j <= 0 or a deficit outside [0, 1].
double wake_deficit(const WakeContribution& c);

/// (1 - sqrt(sum d_j^2)) U_inf, floored at 0.
double sos_superpose(double u_inf, std::span<const WakeContribution> wakes);
/// (1 - sum d_j) U_inf, floored at 0.
double linear_superpose(double u_inf, std::span<const WakeContribution> wakes);
/// (1 - max d_j) U_inf.
double max_deficit_superpose(double u_inf, std::span<const WakeContribution> wakes);

double superpose(Superposition m, double u_inf, std::span<const WakeContribution> wakes);

}  // namespace wakegnn::farm
