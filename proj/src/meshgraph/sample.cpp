#include "wakegnn/meshgraph/sample.hpp"

#include <cmath>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::mesh {

void validate(const GlobalConditions& c) {
  if (!(c.u_inf > 0.0) || !std::isfinite(c.u_inf)) throw ConfigError("conditions: u_inf must be positive");
  if (!(c.ti_inf >= 0.0 && c.ti_inf < 1.0)) throw ConfigError("conditions: ti_inf must lie in [0, 1)");
  if (!(c.yaw_deg > -90.0 && c.yaw_deg < 90.0)) throw ConfigError("conditions: yaw_deg must lie in (-90, 90)");
}

double FieldSnapshot::speed(std::size_t i) const {
  return std::sqrt(u[i] * u[i] + v[i] * v[i] + w[i] * w[i]);
}

void validate(const FieldSnapshot& f, std::size_t n_vertices) {
  if (f.u.size() != n_vertices || f.v.size() != n_vertices || f.w.size() != n_vertices ||
      f.tke.size() != n_vertices) {
    throw DataError("field snapshot arrays do not match the vertex count " + std::to_string(n_vertices));
  }
  for (std::size_t i = 0; i < n_vertices; ++i) {
    if (!(f.tke[i] >= 0.0)) throw DataError("negative or non-finite tke at vertex " + std::to_string(i));
  }
}

void to_json(nlohmann::json& j, const GlobalConditions& c) {
  j = {{"u_inf", c.u_inf}, {"ti_inf", c.ti_inf}, {"yaw_deg", c.yaw_deg}};
}

void from_json(const nlohmann::json& j, GlobalConditions& c) {
  c.u_inf = j.at("u_inf").get<double>();
  c.ti_inf = j.at("ti_inf").get<double>();
  c.yaw_deg = j.value("yaw_deg", 0.0);
}

}  // namespace wakegnn::mesh
