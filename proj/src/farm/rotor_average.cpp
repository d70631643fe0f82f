#include "wakegnn/farm/rotor_average.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::farm {

std::string_view to_string(Averaging a) { return a == Averaging::Rotor ? "rotor" : "hub"; }

Averaging averaging_from_string(std::string_view s) {
  if (s == "rotor") return Averaging::Rotor;
  if (s == "hub") return Averaging::Hub;
  throw UsageError("unknown averaging mode '" + std::string(s) + "' (expected rotor or hub)");
}

std::array<Vec3, kRotorPoints> rotor_points(const Vec3& center, double radius) {
  std::array<Vec3, kRotorPoints> pts;
  pts[0] = center;
  std::size_t k = 1;
  for (double frac : {0.5, 0.9}) {
    for (int i = 0; i < 10; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / 10.0;
      pts[k++] = {center.x, center.y + frac * radius * std::cos(theta), center.z + frac * radius * std::sin(theta)};
    }
  }
  return pts;
}

FieldSampler::FieldSampler(std::shared_ptr<const mesh::Graph> graph, std::size_t neighbors, double power)
    : graph_(std::move(graph)), tree_(graph_->positions()), neighbors_(neighbors), power_(power) {
  if (graph_->n_vertices() == 0) throw DataError("field sampler: empty graph");
  if (neighbors_ == 0) throw ConfigError("field sampler: need at least one neighbour");
  bounds_ = graph_->bounds();
}

bool FieldSampler::contains(const Vec3& p) const {
  const double tol = 1e-9 * (1.0 + norm(bounds_[1] - bounds_[0]));
  for (int a = 0; a < 3; ++a) {
    if (p[a] < bounds_[0][a] - tol || p[a] > bounds_[1][a] + tol) return false;
  }
  return true;
}

double FieldSampler::interpolate(std::span<const double> values, const Vec3& p) const {
  if (values.size() != graph_->n_vertices()) throw DimensionError("field sampler: value count differs from vertex count");
  if (!contains(p)) {
    throw DomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.z) +
                      ") lies outside the field domain");
  }
  const auto hits = tree_.nearest(p, neighbors_);
  if (hits.front().dist2 == 0.0) return values[hits.front().index];
  // Weighted mean of differences from the nearest value keeps constants exact.
  const double ref = values[hits.front().index];
  double num = 0.0;
  double den = 0.0;
  for (const auto& h : hits) {
    const double w = std::pow(h.dist2, -0.5 * power_);
    num += w * (values[h.index] - ref);
    den += w;
  }
  return ref + num / den;
}

double rotor_averaged_velocity(const FieldSampler& sampler, std::span<const double> speed, const Vec3& center,
                               double radius, Averaging mode) {
  if (mode == Averaging::Hub) return sampler.interpolate(speed, center);
  double sum = 0.0;
  for (const Vec3& p : rotor_points(center, radius)) sum += sampler.interpolate(speed, p);
  return sum / static_cast<double>(kRotorPoints);
}

}  // namespace wakegnn::farm
