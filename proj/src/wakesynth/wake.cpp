#include "wakegnn/wakesynth/wake.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wakegnn/common/error.hpp"
#include "wakegnn/gad/power_curve.hpp"

namespace wakegnn::synth {

void validate(const WakeParams& p) {
  if (!(p.ct > 0.0 && p.ct < 1.0)) throw ParameterError("wake: C_T must lie in (0, 1)");
  if (p.k_w && !(*p.k_w > 0.0)) throw ParameterError("wake: k_w must be positive");
  if (!(p.sigma0_over_d > 0.0)) throw ParameterError("wake: sigma0 must be positive");
  if (!(p.k_def >= 0.0) || !(p.k_i >= 0.0)) throw ParameterError("wake: gains must be non-negative");
  if (!std::isfinite(p.shear)) throw ParameterError("wake: shear exponent must be finite");
  if (!(p.min_radicand > 0.0 && p.min_radicand <= 1.0)) throw ParameterError("wake: min_radicand must lie in (0, 1]");
}

double wake_sigma(double x, double ti_inf, const WakeRotor& rotor, const WakeParams& p) {
  return p.sigma0_over_d * rotor.diameter + p.growth_rate(ti_inf) * x;
}

double centerline_deficit(double x, const mesh::GlobalConditions& cond, const WakeRotor& rotor, const WakeParams& p) {
  if (x <= 0.0) return 0.0;
  const double s = wake_sigma(x, cond.ti_inf, rotor, p) / rotor.diameter;
  const double cy = std::cos(cond.yaw_deg * std::numbers::pi / 180.0);
  double radicand = 1.0 - p.ct * cy * cy / (8.0 * s * s);
  if (p.near_wake_clamp) {
    radicand = std::max(radicand, p.min_radicand);
  } else if (radicand < 0.0) {
    throw ParameterError("wake: negative radicand in the centreline deficit at x = " + std::to_string(x) +
                         " m; raise sigma0 or lower C_T");
  }
  return std::clamp(1.0 - std::sqrt(radicand), 0.0, 1.0);
}

double wake_deflection(double x, double yaw_deg, const WakeRotor& rotor, const WakeParams& p) {
  if (x <= 0.0) return 0.0;
  const double d = rotor.diameter;
  return p.k_def * std::sin(yaw_deg * std::numbers::pi / 180.0) * x * (d / (d + x));
}

WakePoint evaluate_wake(const Vec3& p, const mesh::GlobalConditions& cond, const WakeRotor& rotor,
                        const WakeParams& params) {
  if (!(p[2] > 0.0)) throw ParameterError("wake: the inflow profile needs z > 0");
  const double base = cond.u_inf * std::pow(p[2] / rotor.hub_height, params.shear);
  const double tke_ref = gad::abl_reference_tke(cond.u_inf, cond.ti_inf);
  WakePoint out{base, tke_ref, 0.0};
  if (p[0] <= 0.0) return out;
  const double c = centerline_deficit(p[0], cond, rotor, params);
  const double sigma = wake_sigma(p[0], cond.ti_inf, rotor, params);
  const double dy = p[1] - wake_deflection(p[0], cond.yaw_deg, rotor, params);
  const double dz = p[2] - rotor.hub_height;
  const double f = c * std::exp(-(dy * dy + dz * dz) / (2.0 * sigma * sigma));
  out.deficit = f;
  out.u = base * (1.0 - f);
  out.tke = tke_ref + params.k_i * f * cond.u_inf * cond.u_inf * cond.ti_inf;
  return out;
}

mesh::FieldSnapshot synth_wake_field(const mesh::Graph& g, const mesh::GlobalConditions& cond,
                                     const WakeRotor& rotor, const WakeParams& p) {
  mesh::validate(cond);
  validate(p);
  auto out = mesh::FieldSnapshot::zeros(g.n_vertices());
  const auto& pos = g.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const WakePoint w = evaluate_wake(pos[i], cond, rotor, p);
    out.u[i] = w.u;
    out.tke[i] = w.tke;
  }
  return out;
}

void to_json(nlohmann::json& j, const WakeParams& p) {
  j = {{"ct", p.ct},
       {"sigma0_over_d", p.sigma0_over_d},
       {"k_def", p.k_def},
       {"k_i", p.k_i},
       {"shear", p.shear},
       {"near_wake_clamp", p.near_wake_clamp},
       {"min_radicand", p.min_radicand}};
  if (p.k_w) j["k_w"] = *p.k_w;
}

void from_json(const nlohmann::json& j, WakeParams& p) {
  p = WakeParams{};
  p.ct = j.value("ct", p.ct);
  p.sigma0_over_d = j.value("sigma0_over_d", p.sigma0_over_d);
  p.k_def = j.value("k_def", p.k_def);
  p.k_i = j.value("k_i", p.k_i);
  p.shear = j.value("shear", p.shear);
  p.near_wake_clamp = j.value("near_wake_clamp", p.near_wake_clamp);
  p.min_radicand = j.value("min_radicand", p.min_radicand);
  if (j.contains("k_w") && !j.at("k_w").is_null()) p.k_w = j.at("k_w").get<double>();
  validate(p);
}

}  // namespace wakegnn::synth
