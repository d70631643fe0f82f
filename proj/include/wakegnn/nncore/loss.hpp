#pragma once

#include "wakegnn/nncore/tensor.hpp"

namespace wakegnn::nn {

template <typename T>
struct LossResult {
  T value;
  Tensor2<T> grad;
};

/// Mean over every entry of (pred - target)^2, with gradient 2 (pred - target) / count.
template <typename T>
LossResult<T> mse_loss(const Tensor2<T>& pred, const Tensor2<T>& target) {
  require_same_shape(pred, target, "mse_loss");
  if (pred.size() == 0) {
    throw DimensionError("mse_loss: empty tensors");
  }
  const T count = static_cast<T>(pred.size());
  Tensor2<T> diff = pred - target;
  LossResult<T> r;
  r.value = diff.squaredNorm() / count;
  r.grad = diff * (T(2) / count);
  return r;
}

}  // namespace wakegnn::nn
