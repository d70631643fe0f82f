#pragma once

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "wakegnn/common/vec3.hpp"
#include "wakegnn/farm/kdtree.hpp"
#include "wakegnn/meshgraph/graph.hpp"

namespace wakegnn::farm {

enum class Averaging { Rotor, Hub };

std::string_view to_string(Averaging a);
Averaging averaging_from_string(std::string_view s);

inline constexpr std::size_t kRotorPoints = 21;

/// Disk centre plus rings at 0.5 R and 0.9 R with 10 equally spaced points each,
/// in the y-z plane (disk normal along +x).
std::array<Vec3, kRotorPoints> rotor_points(const Vec3& center, double radius);

/// Inverse-distance interpolation (power 2, 8 nearest) of per-vertex values.
class FieldSampler {
 public:
  explicit FieldSampler(std::shared_ptr<const mesh::Graph> graph, std::size_t neighbors = 8, double power = 2.0);

  const mesh::Graph& graph() const { return *graph_; }
  /// Vertex bounding box.
  const std::array<Vec3, 2>& bounds() const { return bounds_; }
  bool contains(const Vec3& p) const;

  /// Interpolated value at p; a constant field is reproduced exactly. Throws
  /// DomainError outside the bounding box.
  double interpolate(std::span<const double> values, const Vec3& p) const;

 private:
  std::shared_ptr<const mesh::Graph> graph_;
  KdTree tree_;
  std::array<Vec3, 2> bounds_;
  std::size_t neighbors_;
  double power_;
};

/// Mean of the interpolated speed over the rotor points (or the hub point only).
/// Throws DomainError when any point lies outside the field.
double rotor_averaged_velocity(const FieldSampler& sampler, std::span<const double> speed, const Vec3& center,
                               double radius, Averaging mode = Averaging::Rotor);

}  // namespace wakegnn::farm
