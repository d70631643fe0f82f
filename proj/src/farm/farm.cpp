#include "wakegnn/farm/farm.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "wakegnn/common/error.hpp"
#include "wakegnn/gad/power_curve.hpp"

namespace wakegnn::farm {

double WakeProvider::coverage_x() const { return std::numeric_limits<double>::infinity(); }

AnalyticWakeProvider::AnalyticWakeProvider(synth::WakeRotor rotor, synth::WakeParams params)
    : rotor_(rotor), params_(std::move(params)) {
  synth::validate(params_);
}

std::vector<double> AnalyticWakeProvider::speeds(const mesh::GlobalConditions& cond, std::span<const Vec3> points,
                                                 QueryFlags&) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back(synth::evaluate_wake(p, cond, rotor_, params_).u);
  return out;
}

FieldWakeProvider::FieldWakeProvider(std::shared_ptr<const mesh::Graph> graph, FieldFn field, std::string name)
    : sampler_(std::move(graph)), field_(std::move(field)), name_(std::move(name)) {}

double FieldWakeProvider::coverage_x() const { return sampler_.bounds()[1].x; }

const std::vector<double>& FieldWakeProvider::speed_field(const mesh::GlobalConditions& cond) const {
  const std::array<double, 3> key{cond.u_inf, cond.ti_inf, cond.yaw_deg};
  std::lock_guard lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    const mesh::FieldSnapshot f = field_(sampler_.graph(), cond);
    std::vector<double> speed(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) speed[i] = f.speed(i);
    it = cache_.emplace(key, std::move(speed)).first;
  }
  return it->second;
}

std::vector<double> FieldWakeProvider::speeds(const mesh::GlobalConditions& cond, std::span<const Vec3> points,
                                              QueryFlags& flags) const {
  const auto& field = speed_field(cond);
  const double x_max = coverage_x();
  std::vector<double> out;
  out.reserve(points.size());
  for (Vec3 p : points) {
    if (p.x > x_max) {
      p.x = x_max;
      flags.extrapolated_x = true;
    }
    out.push_back(sampler_.interpolate(field, p));
  }
  return out;
}

std::unique_ptr<FieldWakeProvider> make_synth_provider(std::shared_ptr<const mesh::Graph> graph,
                                                       synth::WakeRotor rotor, synth::WakeParams params) {
  synth::validate(params);
  auto fn = [rotor, params](const mesh::Graph& g, const mesh::GlobalConditions& c) {
    return synth::synth_wake_field(g, c, rotor, params);
  };
  return std::make_unique<FieldWakeProvider>(std::move(graph), fn, "wakesynth-field");
}

namespace {

bool interacts(const Turbine& upstream, const Turbine& downstream) {
  if (!(upstream.x < downstream.x)) return false;
  return upstream.row.empty() || downstream.row.empty() || upstream.row == downstream.row;
}

double average(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

FarmResult farm_power(const FarmLayout& layout, const WakeProvider& provider, const mesh::GlobalConditions& cond,
                      const FarmOptions& options) {
  validate(layout);
  mesh::validate(cond);
  const auto& ts = layout.turbines;
  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ts[a].x < ts[b].x; });

  FarmResult r;
  r.provider = provider.name();
  r.coverage_x = provider.coverage_x();
  r.options = options;
  r.conditions = cond;
  r.turbines.resize(ts.size());

  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    const Turbine& ti = ts[i];
    const gad::RotorSpec& rotor_i = layout.rotor(ti);
    TurbineResult& out = r.turbines[i];
    out.id = ti.id;
    out.row = ti.row;
    out.x = ti.x;
    out.y = ti.y;

    std::vector<WakeContribution> wakes;
    for (std::size_t m = 0; m < k; ++m) {
      const std::size_t j = order[m];
      const Turbine& tj = ts[j];
      if (!interacts(tj, ti)) continue;
      const mesh::GlobalConditions cj{r.turbines[j].u, cond.ti_inf, tj.yaw_deg.value_or(cond.yaw_deg)};
      if (!(cj.u_inf > 0.0)) continue;  // a stalled upstream rotor sheds no modelled wake
      const Vec3 center{ti.x - tj.x, ti.y - tj.y, rotor_i.hub_height};
      std::vector<Vec3> pts;
      if (options.averaging == Averaging::Hub) {
        pts.push_back(center);
      } else {
        const auto ring = rotor_points(center, rotor_i.radius);
        pts.assign(ring.begin(), ring.end());
      }
      QueryFlags flags;
      double u_ij;
      try {
        u_ij = average(provider.speeds(cj, pts, flags));
      } catch (const DomainError& e) {
        ++out.wakes_outside;
        spdlog::debug("wake of {} does not cover {}: {}", tj.id, ti.id, e.what());
        continue;
      }
      out.extrapolated = out.extrapolated || flags.extrapolated_x;
      double d = 1.0 - u_ij / cj.u_inf;
      if (d < 0.0 || d > 1.0) {
        out.deficit_clamped = true;
        d = std::clamp(d, 0.0, 1.0);
      }
      wakes.push_back({cj.u_inf * (1.0 - d), cj.u_inf});
    }
    out.n_wakes = wakes.size();
    out.u = superpose(options.method, cond.u_inf, wakes);
    out.power = gad::power_from_curve(layout.curve(ti), out.u, rotor_i.radius, rotor_i.rho);
  }
  const auto n_extrap = std::count_if(r.turbines.begin(), r.turbines.end(), [](const auto& t) { return t.extrapolated; });
  if (n_extrap > 0) {
    spdlog::warn("{} turbines see wakes beyond the covered x range ({:.1f} m); the farthest slice was reused",
                 n_extrap, r.coverage_x);
  }
  return r;
}

std::vector<double> farm_field(const FarmLayout& layout, const WakeProvider& provider, const FarmResult& result,
                               const mesh::Graph& g) {
  const auto& ts = layout.turbines;
  if (result.turbines.size() != ts.size()) throw DataError("farm_field: result does not match the layout");
  const auto& pos = g.positions();

  // Row of each vertex: the row of the laterally nearest turbine.
  std::vector<const Turbine*> nearest(pos.size(), nullptr);
  for (std::size_t v = 0; v < pos.size(); ++v) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : ts) {
      const double d = std::abs(pos[v].y - t.y);
      if (d < best) {
        best = d;
        nearest[v] = &t;
      }
    }
  }

  std::vector<std::vector<double>> deficits(pos.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const Turbine& tj = ts[j];
    const mesh::GlobalConditions cj{result.turbines[j].u, result.conditions.ti_inf,
                                    tj.yaw_deg.value_or(result.conditions.yaw_deg)};
    if (!(cj.u_inf > 0.0)) continue;
    for (std::size_t v = 0; v < pos.size(); ++v) {
      if (!(pos[v].x > tj.x)) continue;
      if (!tj.row.empty() && !nearest[v]->row.empty() && nearest[v]->row != tj.row) continue;
      const Vec3 p{pos[v].x - tj.x, pos[v].y - tj.y, pos[v].z};
      QueryFlags flags;
      try {
        const double u = provider.speeds(cj, std::span<const Vec3>(&p, 1), flags).front();
        deficits[v].push_back(std::clamp(1.0 - u / cj.u_inf, 0.0, 1.0));
      } catch (const DomainError&) {
      }
    }
  }
  std::vector<double> out(pos.size());
  for (std::size_t v = 0; v < pos.size(); ++v) {
    std::vector<WakeContribution> w;
    for (double d : deficits[v]) w.push_back({result.conditions.u_inf * (1.0 - d), result.conditions.u_inf});
    out[v] = superpose(result.options.method, result.conditions.u_inf, w);
  }
  return out;
}

void write_farm_csv(const std::filesystem::path& path, const FarmResult& r) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "id,u_ms,power_w,row,n_wakes,flags\n";
  for (const auto& t : r.turbines) {
    std::string flags;
    if (t.extrapolated) flags += "extrapolated;";
    if (t.deficit_clamped) flags += "deficit_clamped;";
    if (t.wakes_outside > 0) flags += fmt::format("wakes_outside={};", t.wakes_outside);
    if (!flags.empty()) flags.pop_back();
    out << fmt::format("{},{:.9g},{:.9g},{},{},{}\n", t.id, t.u, t.power, t.row, t.n_wakes, flags);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace wakegnn::farm
