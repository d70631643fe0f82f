#include "wakegnn/train/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "wakegnn/common/error.hpp"
#include "wakegnn/gad/power_curve.hpp"

namespace wakegnn::train {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return t == 0.0 ? sorted[lo] : sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw DataError("box_stats: no values");
  std::sort(values.begin(), values.end());
  BoxStats b;
  b.count = values.size();
  b.min = values.front();
  b.max = values.back();
  b.q1 = quantile_sorted(values, 0.25);
  b.median = quantile_sorted(values, 0.5);
  b.q3 = quantile_sorted(values, 0.75);
  b.iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * b.iqr;
  const double hi_fence = b.q3 + 1.5 * b.iqr;
  b.whisker_low = *std::lower_bound(values.begin(), values.end(), lo_fence);
  b.whisker_high = *(std::upper_bound(values.begin(), values.end(), hi_fence) - 1);
  b.outliers = static_cast<std::size_t>(std::count_if(values.begin(), values.end(),
                                                      [&](double v) { return v < lo_fence || v > hi_fence; }));
  b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return b;
}

MetricsReport compute_metrics(std::span<const mesh::FieldSnapshot> pred, std::span<const mesh::FieldSnapshot> truth,
                              std::span<const mesh::GlobalConditions> cond, const mesh::NormalizationStats& stats) {
  if (pred.empty()) throw DataError("evaluate: empty split");
  if (pred.size() != truth.size() || pred.size() != cond.size()) throw DataError("evaluate: mismatched sample counts");
  MetricsReport r;
  r.speed.name = "speed";
  r.tke.name = "tke";
  std::vector<double> speed_inlet;
  std::vector<double> tke_inlet;
  double sq_speed = 0.0, sq_tke = 0.0, sq_norm = 0.0, sq_phys = 0.0;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    const auto& p = pred[s];
    const auto& t = truth[s];
    if (p.size() != t.size()) throw DataError("evaluate: prediction and truth differ in vertex count");
    const double u_ref = cond[s].u_inf;
    const double k_ref = gad::abl_reference_tke(cond[s].u_inf, cond[s].ti_inf);
    const auto ref = mesh::target_reference(cond[s], stats.target_mode);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double ps = p.speed(i), ts = t.speed(i);
      const double ds = std::abs(ps - ts);
      r.speed.relative_error.push_back(ds / std::max(std::abs(ts), kRelativeErrorFloor));
      speed_inlet.push_back(ds / u_ref);
      sq_speed += ds * ds;
      const double dk = std::abs(p.tke[i] - t.tke[i]);
      r.tke.relative_error.push_back(dk / std::max(std::abs(t.tke[i]), kRelativeErrorFloor));
      tke_inlet.push_back(k_ref > 0.0 ? dk / k_ref : dk);
      sq_tke += dk * dk;
      const std::array<double, 4> diff{p.u[i] - t.u[i], p.v[i] - t.v[i], p.w[i] - t.w[i], p.tke[i] - t.tke[i]};
      for (int c = 0; c < 4; ++c) {
        sq_phys += diff[c] * diff[c];
        const double z = diff[c] / (stats.target_scale[c] * ref[c]);
        sq_norm += z * z;
      }
    }
    r.n_vertices += p.size();
  }
  r.n_samples = pred.size();
  if (r.n_vertices == 0) throw DataError("evaluate: samples have no vertices");
  const double n = static_cast<double>(r.n_vertices);
  r.speed.mse = sq_speed / n;
  r.tke.mse = sq_tke / n;
  r.mse_physical = sq_phys / (4.0 * n);
  r.mse_normalized = sq_norm / (4.0 * n);
  r.speed.relative = box_stats(r.speed.relative_error);
  r.tke.relative = box_stats(r.tke.relative_error);
  r.speed.inlet_normalized = box_stats(std::move(speed_inlet));
  r.tke.inlet_normalized = box_stats(std::move(tke_inlet));
  r.speed.median_accuracy = 1.0 - r.speed.relative.median;
  r.tke.median_accuracy = 1.0 - r.tke.relative.median;
  return r;
}

namespace {

std::string box_row(const std::string& field, const std::string& kind, const BoxStats& b) {
  return fmt::format("{},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{}\n", field, kind,
                     b.count, b.min, b.whisker_low, b.q1, b.median, b.q3, b.whisker_high, b.max, b.iqr, b.mean,
                     b.outliers);
}

}  // namespace

void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& r) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "field,error,count,min,whisker_low,q1,median,q3,whisker_high,max,iqr,mean,outliers\n";
  for (const FieldMetrics* f : {&r.speed, &r.tke}) {
    out << box_row(f->name, "relative", f->relative);
    out << box_row(f->name, "inlet_normalized", f->inlet_normalized);
  }
  out << fmt::format("# median_accuracy_speed={:.9g} median_accuracy_tke={:.9g} mse_normalized={:.9g} "
                     "mse_physical={:.9g} samples={} vertices={} relative_floor={}\n",
                     r.speed.median_accuracy, r.tke.median_accuracy, r.mse_normalized, r.mse_physical, r.n_samples,
                     r.n_vertices, kRelativeErrorFloor);
  if (!out) throw DataError("failed writing " + path.string());
}

std::string format_summary(const MetricsReport& r) {
  std::string s = fmt::format("samples {}  vertices {}  mse(norm) {:.4g}  mse(phys) {:.4g}\n", r.n_samples,
                              r.n_vertices, r.mse_normalized, r.mse_physical);
  for (const FieldMetrics* f : {&r.speed, &r.tke}) {
    const BoxStats& b = f->relative;
    s += fmt::format("{:>5}: median accuracy {:.3f}%  rel.err whiskers [{:.3g}, {:.3g}]  box [{:.3g}, {:.3g}]  "
                     "outliers {}\n",
                     f->name, 100.0 * f->median_accuracy, b.whisker_low, b.whisker_high, b.q1, b.q3, b.outliers);
  }
  return s;
}

}  // namespace wakegnn::train
