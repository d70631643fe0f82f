#include "wakegnn/gad/rotor.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "wakegnn/common/error.hpp"

namespace wakegnn::gad {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v);
  for (double& x : out) x *= s;
  return out;
}

}  // namespace

double RotorSpec::rotor_speed(double u_inf) const {
  if (omega) return *omega;
  if (tsr) return *tsr * u_inf / radius;
  throw ConfigError("rotor: neither omega nor tsr set");
}

void validate(const RotorSpec& r) {
  if (r.n_blades < 1) throw ConfigError("rotor: n_blades must be at least 1");
  if (!(r.radius > 0.0)) throw ConfigError("rotor: radius must be positive");
  if (!(r.hub_height > r.radius)) throw ConfigError("rotor: hub height must exceed the radius");
  if (!(r.rho > 0.0)) throw ConfigError("rotor: density must be positive");
  if (r.omega.has_value() == r.tsr.has_value()) throw ConfigError("rotor: set exactly one of omega and tsr");
  if (r.omega && !(*r.omega > 0.0)) throw ConfigError("rotor: omega must be positive");
  if (r.tsr && !(*r.tsr > 0.0)) throw ConfigError("rotor: tsr must be positive");
  validate(r.power_curve);
  if (r.elements.empty()) return;
  validate(r.polar);
  const double tol = 1e-6 * r.radius;
  double edge = 0.0;
  if (r.nacelle) {
    validate(*r.nacelle, r.radius);
    if (std::abs(r.nacelle->r - 0.5 * r.nacelle->dr) > tol) throw ConfigError("rotor: nacelle must start at r = 0");
    edge = r.nacelle->r + 0.5 * r.nacelle->dr;
  }
  for (std::size_t i = 0; i < r.elements.size(); ++i) {
    const BladeElement& e = r.elements[i];
    validate(e, r.radius);
    const double lo = e.r - 0.5 * e.dr;
    if (i == 0 && !r.nacelle) {
      if (lo < -tol) throw ConfigError("rotor: first element extends below r = 0");
    } else if (std::abs(lo - edge) > tol) {
      throw ConfigError("rotor: elements must tile the span without gaps or overlap");
    }
    edge = e.r + 0.5 * e.dr;
  }
  if (std::abs(edge - r.radius) > tol) throw ConfigError("rotor: elements must end at the tip radius");
}

RotorSpec default_rotor() {
  RotorSpec r;
  r.tsr = 8.0;
  r.power_curve.u = {3.0, 25.0};
  r.power_curve.cp = {0.45, 0.45};
  return r;
}

RotorLoadsReport uniform_inflow_loads(const RotorSpec& r, double u_inf, double thickness) {
  const double omega = r.rotor_speed(u_inf);
  std::vector<DiskCell> cells;
  RotorLoadsReport report;
  auto add = [&](const BladeElement& e, std::optional<ForceCoefficients> fixed) {
    const FlowSample flow{u_inf, 0.0};
    ElementForces f;
    if (fixed) {
      const double u_rel = relative_speed(omega, e.r, 0.0, u_inf);
      f = element_forces(e.chord, e.dr, r.rho, u_rel, inflow_angle(omega, e.r, 0.0, u_inf), *fixed);
    } else {
      f = element_forces(e, flow, r.polar, r.rho, omega);
      if (f.polar_clamped) ++report.clamped_elements;
    }
    const SourceTerms s = source_terms(f, r.n_blades);
    const double volume = 2.0 * std::numbers::pi * std::max(e.r, 0.5 * e.dr) * e.dr * thickness;
    // Sources are forces per unit mass of disk fluid, so divide out rho V.
    cells.push_back({volume, e.r, s.normal.magnitude / (r.rho * volume), s.tangential.magnitude / (r.rho * volume)});
  };
  if (r.nacelle) add(*r.nacelle, kNacelleCoefficients);
  for (const BladeElement& e : r.elements) add(e, std::nullopt);
  if (cells.empty()) throw ConfigError("rotor: no elements to integrate");
  report.loads = rotor_integrate(cells, r.rho, omega);
  return report;
}

namespace {

BladeElement element_from_json(const nlohmann::json& j) {
  BladeElement e;
  e.r = j.at("r").get<double>();
  e.dr = j.at("dr").get<double>();
  e.chord = j.at("chord").get<double>();
  e.twist = j.value("twist_deg", 0.0) * kDeg;
  e.pitch = j.value("pitch_deg", 0.0) * kDeg;
  return e;
}

nlohmann::json element_to_json(const BladeElement& e) {
  return {{"r", e.r}, {"dr", e.dr}, {"chord", e.chord}, {"twist_deg", e.twist / kDeg}, {"pitch_deg", e.pitch / kDeg}};
}

}  // namespace

RotorSpec rotor_from_json(const nlohmann::json& j) {
  try {
    RotorSpec r;
    r.radius = j.value("radius", r.radius);
    r.hub_height = j.value("hub_height", r.hub_height);
    r.n_blades = j.value("n_blades", r.n_blades);
    r.rho = j.value("rho", r.rho);
    if (j.contains("omega")) r.omega = j.at("omega").get<double>();
    if (j.contains("tsr")) r.tsr = j.at("tsr").get<double>();
    if (j.contains("elements")) {
      for (const auto& e : j.at("elements")) r.elements.push_back(element_from_json(e));
    }
    if (j.contains("nacelle")) r.nacelle = element_from_json(j.at("nacelle"));
    if (j.contains("polar")) {
      const auto& p = j.at("polar");
      r.polar.alpha = scaled(p.at("alpha_deg").get<std::vector<double>>(), kDeg);
      r.polar.reynolds = p.at("reynolds").get<std::vector<double>>();
      r.polar.cl = p.at("cl").get<std::vector<std::vector<double>>>();
      r.polar.cd = p.at("cd").get<std::vector<std::vector<double>>>();
    }
    if (j.contains("power_curve")) {
      const auto& c = j.at("power_curve");
      r.power_curve.u = c.at("u").get<std::vector<double>>();
      r.power_curve.cp = c.at("cp").get<std::vector<double>>();
      r.power_curve.cut_in = c.value("cut_in", r.power_curve.cut_in);
      r.power_curve.cut_out = c.value("cut_out", r.power_curve.cut_out);
    } else {
      r.power_curve = default_rotor().power_curve;
    }
    if (!r.omega && !r.tsr) r.tsr = default_rotor().tsr;
    validate(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("rotor file: ") + e.what());
  }
}

nlohmann::json rotor_to_json(const RotorSpec& r) {
  nlohmann::json j = {{"radius", r.radius}, {"hub_height", r.hub_height}, {"n_blades", r.n_blades}, {"rho", r.rho}};
  if (r.omega) j["omega"] = *r.omega;
  if (r.tsr) j["tsr"] = *r.tsr;
  if (!r.elements.empty()) {
    j["elements"] = nlohmann::json::array();
    for (const auto& e : r.elements) j["elements"].push_back(element_to_json(e));
    j["polar"] = {{"alpha_deg", scaled(r.polar.alpha, 1.0 / kDeg)},
                  {"reynolds", r.polar.reynolds},
                  {"cl", r.polar.cl},
                  {"cd", r.polar.cd}};
  }
  if (r.nacelle) j["nacelle"] = element_to_json(*r.nacelle);
  j["power_curve"] = {{"u", r.power_curve.u},
                      {"cp", r.power_curve.cp},
                      {"cut_in", r.power_curve.cut_in},
                      {"cut_out", r.power_curve.cut_out}};
  return j;
}

RotorSpec load_rotor_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rotor file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("rotor file " + path.string() + ": " + e.what());
  }
  return rotor_from_json(j);
}

}  // namespace wakegnn::gad
