#pragma once

// Reference implementations used as test oracles. Everything here works on
// dense matrices and explicit loops so it shares no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wakegnn/meshgraph/graph.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using wakegnn::mesh::BoundaryTag;
using wakegnn::mesh::Edge;
using wakegnn::mesh::Graph;

/// Random simple undirected graph on n vertices with edge probability p.
inline std::vector<std::pair<int, int>> random_edges(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) e.emplace_back(a, b);
  return e;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline std::vector<std::pair<int, int>> random_connected_edges(int n, double extra_p, std::mt19937_64& rng) {
  std::set<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v) {
    const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
    e.emplace(u, v);
  }
  for (auto pr : random_edges(n, extra_p, rng)) e.insert(pr);
  return {e.begin(), e.end()};
}

inline Graph make_graph(int n, const std::vector<std::pair<int, int>>& undirected) {
  std::vector<wakegnn::Vec3> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = {double(i), 0.0, 0.0};
  std::vector<Edge> e;
  for (auto [a, b] : undirected) e.push_back({std::uint32_t(a), std::uint32_t(b)});
  return wakegnn::mesh::mesh_to_graph(pos, e, std::vector<BoundaryTag>(n, BoundaryTag::Interior)).graph;
}

inline Mat adjacency(int n, const std::vector<std::pair<int, int>>& undirected) {
  Mat a = Mat::Zero(n, n);
  for (auto [x, y] : undirected) a(x, y) = a(y, x) = 1.0;
  return a;
}

inline Mat relu(Mat m) { return m.cwiseMax(0.0); }

inline Mat add_bias(Mat m, const Mat& b) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) += b.row(0);
  return m;
}

/// [h | D^-1 A h] W + b, zero aggregate for isolated vertices.
inline Mat sage(const Mat& h, const Mat& a, const Mat& w, const Mat& b, bool act) {
  const Eigen::Index n = h.rows();
  Mat agg = Mat::Zero(n, h.cols());
  for (Eigen::Index v = 0; v < n; ++v) {
    const double deg = a.row(v).sum();
    if (deg > 0) agg.row(v) = a.row(v) * h / deg;
  }
  Mat cat(n, 2 * h.cols());
  cat << h, agg;
  Mat out = add_bias(cat * w, b);
  return act ? relu(out) : out;
}

/// D^-1/2 (A + I) D^-1/2 h W + b.
inline Mat gcn(const Mat& h, const Mat& a, const Mat& w, const Mat& b, bool act) {
  const Eigen::Index n = h.rows();
  const Mat ahat = a + Mat::Identity(n, n);
  const Eigen::VectorXd d = ahat.rowwise().sum();
  Mat norm(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) norm(i, j) = ahat(i, j) / std::sqrt(d(i) * d(j));
  Mat out = add_bias(norm * h * w, b);
  return act ? relu(out) : out;
}

/// Multi-head additive attention, softmax over N(v) (plus v when include_self).
inline Mat gat(const Mat& h, const Mat& a, const Mat& w, const Mat& b, const Mat& att_src, const Mat& att_dst,
               int heads, bool include_self, bool act) {
  const Eigen::Index n = h.rows();
  const Eigen::Index width = w.cols() / heads;
  const Mat xw = h * w;
  Mat out = Mat::Zero(n, w.cols());
  auto leaky = [](double x) { return x > 0 ? x : 0.2 * x; };
  for (int k = 0; k < heads; ++k) {
    const Mat blk = xw.middleCols(k * width, width);
    for (Eigen::Index v = 0; v < n; ++v) {
      std::vector<Eigen::Index> nb;
      for (Eigen::Index u = 0; u < n; ++u)
        if (a(v, u) != 0.0 || (include_self && u == v)) nb.push_back(u);
      if (nb.empty()) continue;
      std::vector<double> e;
      for (auto u : nb) e.push_back(leaky(att_dst.row(k).dot(blk.row(v)) + att_src.row(k).dot(blk.row(u))));
      const double mx = *std::max_element(e.begin(), e.end());
      double z = 0.0;
      for (double& x : e) z += (x = std::exp(x - mx));
      for (std::size_t i = 0; i < nb.size(); ++i) out.block(v, k * width, 1, width) += e[i] / z * blk.row(nb[i]);
    }
  }
  out = add_bias(out, b);
  return act ? relu(out) : out;
}

/// Central-difference derivative of f at every entry of `x`, perturbing in place.
template <typename Tensor>
Mat numeric_gradient(Tensor& x, const std::function<double()>& f, double h) {
  Mat g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double keep = x(i, j);
      x(i, j) = keep + h;
      const double fp = f();
      x(i, j) = keep - h;
      const double fm = f();
      x(i, j) = keep;
      g(i, j) = (fp - fm) / (2 * h);
    }
  }
  return g;
}

/// max |a - n| / max(|a|, |n|, floor) over all entries.
inline double max_relative_error(const Mat& analytic, const Mat& numeric, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double a = analytic.data()[i];
    const double n = numeric.data()[i];
    worst = std::max(worst, std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor}));
  }
  return worst;
}

}  // namespace oracle
