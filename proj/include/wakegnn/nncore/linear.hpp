#pragma once

#include <cstdint>

#include "wakegnn/nncore/tensor.hpp"

namespace wakegnn::nn {

/// Affine map `out = x W + b` with W stored in x out.
template <typename T>
struct LinearParams {
  Tensor2<T> weight;  // in x out
  Tensor2<T> bias;    // 1 x out

  Eigen::Index in_features() const { return weight.rows(); }
  Eigen::Index out_features() const { return weight.cols(); }
};

template <typename T>
struct LinearGrads {
  Tensor2<T> input;
  Tensor2<T> weight;
  Tensor2<T> bias;
};

/// Glorot-uniform weights, zero bias. Deterministic for a given seed.
template <typename T>
LinearParams<T> init_params(Eigen::Index in, Eigen::Index out, std::uint64_t seed);

template <typename T>
LinearParams<T> zeros_like(const LinearParams<T>& p) {
  return {Tensor2<T>::Zero(p.weight.rows(), p.weight.cols()), Tensor2<T>::Zero(1, p.bias.cols())};
}

template <typename T>
std::size_t count_params(const LinearParams<T>& p) {
  return static_cast<std::size_t>(p.weight.size() + p.bias.size());
}

template <typename T>
Tensor2<T> linear_forward(const Tensor2<T>& x, const LinearParams<T>& p);

/// Exact gradients of `x W + b` given the upstream gradient. `want_input` = false
/// skips the input gradient (first layer).
template <typename T>
LinearGrads<T> linear_backward(const Tensor2<T>& x, const LinearParams<T>& p, const Tensor2<T>& grad_out,
                               bool want_input = true);

}  // namespace wakegnn::nn
