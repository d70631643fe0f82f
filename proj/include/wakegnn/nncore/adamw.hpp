#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wakegnn/nncore/tensor.hpp"

namespace wakegnn::nn {

struct AdamWHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

/// A parameter tensor paired with its gradient for one optimizer step.
template <typename T>
struct ParamSlot {
  std::string name;
  Tensor2<T>* value;
  const Tensor2<T>* grad;
};

template <typename T>
struct AdamWState {
  AdamWHyper hyper;
  std::int64_t step = 0;
  std::vector<Tensor2<T>> first_moment;
  std::vector<Tensor2<T>> second_moment;
};

/// Decoupled weight decay followed by a bias-corrected Adam update:
///   w <- w (1 - lr wd);  w <- w - lr m_hat / (sqrt(v_hat) + eps)
/// Moments are created lazily on the first call. Every gradient is checked
/// for finiteness before any parameter is touched.
template <typename T>
void adamw_step(std::span<const ParamSlot<T>> slots, AdamWState<T>& state, double lr);

}  // namespace wakegnn::nn
