#pragma once

#include <span>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wakegnn/gnn/model.hpp"

namespace oracle {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t n_checked = 0;
};

/// Compares model_backward against central differences of L = sum(r .* out)
/// for every scalar parameter of the model.
inline GradCheckResult model_gradient_check(wakegnn::gnn::GnnModel<double> model,
                                            std::span<const wakegnn::gnn::NeighborLists> nbrs,
                                            const wakegnn::nn::Tensor2<double>& x,
                                            const wakegnn::nn::Tensor2<double>& r, double h, double floor) {
  using namespace wakegnn;
  gnn::ForwardCache<double> cache;
  gnn::model_forward(model, nbrs, x, &cache);
  auto grads = gnn::zeros_like(model);
  gnn::model_backward(model, nbrs, cache, r, grads);

  std::vector<nn::Tensor2<double>*> params;
  std::vector<std::string> names;
  gnn::for_each_param(model, [&](const std::string& n, nn::Tensor2<double>& t) {
    params.push_back(&t);
    names.push_back(n);
  });
  std::vector<const nn::Tensor2<double>*> analytic;
  gnn::for_each_param(grads, [&](const std::string&, nn::Tensor2<double>& t) { analytic.push_back(&t); });

  auto loss = [&] { return (gnn::model_forward(model, nbrs, x).array() * r.array()).sum(); };
  GradCheckResult res;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Mat num = numeric_gradient(*params[k], loss, h);
    const double e = max_relative_error(Mat(*analytic[k]), num, floor);
    res.n_checked += static_cast<std::size_t>(num.size());
    if (e >= res.max_rel_error) {
      res.max_rel_error = e;
      res.worst_param = names[k];
    }
  }
  return res;
}

}  // namespace oracle
