#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wakegnn/common/vec3.hpp"

namespace wakegnn::farm {

/// Static 3-d tree over a point set for k-nearest queries.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points);

  struct Hit {
    std::uint32_t index;
    double dist2;
  };

  /// The k nearest points sorted by distance (ties by index). Fewer if the set is smaller.
  std::vector<Hit> nearest(const Vec3& q, std::size_t k) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t point;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
  };

  std::int32_t build(std::span<std::uint32_t> idx, int depth);
  void search(std::int32_t node, const Vec3& q, std::size_t k, std::vector<Hit>& heap) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace wakegnn::farm
