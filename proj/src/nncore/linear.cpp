#include "wakegnn/nncore/linear.hpp"

#include <cmath>
#include <random>

namespace wakegnn::nn {

template <typename T>
LinearParams<T> init_params(Eigen::Index in, Eigen::Index out, std::uint64_t seed) {
  if (in <= 0 || out <= 0) {
    throw DimensionError("init_params: dimensions must be positive");
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
  std::mt19937_64 rng(seed);
  // Draw from the raw engine so the sequence does not depend on the
  // standard library's distribution implementation.
  LinearParams<T> p;
  p.weight.resize(in, out);
  for (Eigen::Index i = 0; i < p.weight.size(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    p.weight.data()[i] = static_cast<T>((2.0 * u - 1.0) * bound);
  }
  p.bias = Tensor2<T>::Zero(1, out);
  return p;
}

template <typename T>
Tensor2<T> linear_forward(const Tensor2<T>& x, const LinearParams<T>& p) {
  if (x.cols() != p.weight.rows()) {
    throw DimensionError("linear_forward: input has " + std::to_string(x.cols()) + " columns, layer expects " +
                         std::to_string(p.weight.rows()));
  }
  Tensor2<T> out(x.rows(), p.weight.cols());
  out.noalias() = x * p.weight;
  out.rowwise() += p.bias.row(0);
  return out;
}

template <typename T>
LinearGrads<T> linear_backward(const Tensor2<T>& x, const LinearParams<T>& p, const Tensor2<T>& grad_out,
                               bool want_input) {
  require_shape(grad_out, x.rows(), p.weight.cols(), "linear_backward grad_out");
  LinearGrads<T> g;
  g.weight.noalias() = x.transpose() * grad_out;
  g.bias = grad_out.colwise().sum();
  if (want_input) {
    g.input.noalias() = grad_out * p.weight.transpose();
  }
  return g;
}

template LinearParams<float> init_params<float>(Eigen::Index, Eigen::Index, std::uint64_t);
template LinearParams<double> init_params<double>(Eigen::Index, Eigen::Index, std::uint64_t);
template Tensor2<float> linear_forward(const Tensor2<float>&, const LinearParams<float>&);
template Tensor2<double> linear_forward(const Tensor2<double>&, const LinearParams<double>&);
template LinearGrads<float> linear_backward(const Tensor2<float>&, const LinearParams<float>&, const Tensor2<float>&,
                                            bool);
template LinearGrads<double> linear_backward(const Tensor2<double>&, const LinearParams<double>&,
                                             const Tensor2<double>&, bool);

}  // namespace wakegnn::nn
