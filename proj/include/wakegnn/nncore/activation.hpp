#pragma once

#include "wakegnn/nncore/tensor.hpp"

namespace wakegnn::nn {

template <typename T>
Tensor2<T> relu_forward(const Tensor2<T>& x) {
  return x.cwiseMax(T(0));
}

/// Gradient of relu: `grad` where `x > 0`, zero elsewhere (including x == 0).
template <typename T>
Tensor2<T> relu_backward(const Tensor2<T>& x, const Tensor2<T>& grad) {
  require_same_shape(x, grad, "relu_backward");
  return (x.array() > T(0)).select(grad, T(0));
}

template <typename T>
void relu_backward_inplace(const Tensor2<T>& x, Tensor2<T>& grad) {
  require_same_shape(x, grad, "relu_backward");
  grad = (x.array() > T(0)).select(grad, T(0));
}

}  // namespace wakegnn::nn
