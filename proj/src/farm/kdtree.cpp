#include "wakegnn/farm/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace wakegnn::farm {

namespace {

bool closer(const KdTree::Hit& a, const KdTree::Hit& b) {
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

}  // namespace

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  std::vector<std::uint32_t> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0u);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0);
}

std::int32_t KdTree::build(std::span<std::uint32_t> idx, int depth) {
  if (idx.empty()) return -1;
  const auto axis = static_cast<std::uint8_t>(depth % 3);
  const std::size_t mid = idx.size() / 2;
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(mid), idx.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] < points_[b][axis] || (points_[a][axis] == points_[b][axis] && a < b);
                   });
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({idx[mid], -1, -1, axis});
  const std::int32_t left = build(idx.first(mid), depth + 1);
  const std::int32_t right = build(idx.subspan(mid + 1), depth + 1);
  nodes_[static_cast<std::size_t>(self)].left = left;
  nodes_[static_cast<std::size_t>(self)].right = right;
  return self;
}

void KdTree::search(std::int32_t node, const Vec3& q, std::size_t k, std::vector<Hit>& heap) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const Vec3& p = points_[n.point];
  const Hit hit{n.point, dot(p - q, p - q)};
  if (heap.size() < k) {
    heap.push_back(hit);
    std::push_heap(heap.begin(), heap.end(), closer);
  } else if (closer(hit, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), closer);
    heap.back() = hit;
    std::push_heap(heap.begin(), heap.end(), closer);
  }
  const double delta = q[n.axis] - p[n.axis];
  const std::int32_t near = delta < 0.0 ? n.left : n.right;
  const std::int32_t far = delta < 0.0 ? n.right : n.left;
  search(near, q, k, heap);
  if (heap.size() < k || delta * delta <= heap.front().dist2) search(far, q, k, heap);
}

std::vector<KdTree::Hit> KdTree::nearest(const Vec3& q, std::size_t k) const {
  std::vector<Hit> heap;
  if (k == 0) return heap;
  heap.reserve(k);
  search(root_, q, k, heap);
  std::sort_heap(heap.begin(), heap.end(), closer);
  return heap;
}

}  // namespace wakegnn::farm
