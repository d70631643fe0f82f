#include "wakegnn/nncore/adamw.hpp"

#include <cmath>

namespace wakegnn::nn {

template <typename T>
void adamw_step(std::span<const ParamSlot<T>> slots, AdamWState<T>& state, double lr) {
  if (state.first_moment.empty() && state.step == 0) {
    for (const auto& s : slots) {
      state.first_moment.push_back(Tensor2<T>::Zero(s.value->rows(), s.value->cols()));
      state.second_moment.push_back(Tensor2<T>::Zero(s.value->rows(), s.value->cols()));
    }
  }
  if (state.first_moment.size() != slots.size() || state.second_moment.size() != slots.size()) {
    throw DimensionError("adamw_step: optimizer state holds " + std::to_string(state.first_moment.size()) +
                         " blocks, got " + std::to_string(slots.size()));
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& s = slots[i];
    require_same_shape(*s.value, *s.grad, "adamw_step gradient '" + s.name + "'");
    require_same_shape(*s.value, state.first_moment[i], "adamw_step moment '" + s.name + "'");
    if (!s.grad->allFinite()) {
      throw NumericalError("adamw_step: non-finite gradient in parameter block '" + s.name + "'");
    }
  }

  state.step += 1;
  const auto& h = state.hyper;
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.step));
  const T decay = static_cast<T>(1.0 - lr * h.weight_decay);
  const T b1 = static_cast<T>(h.beta1);
  const T b2 = static_cast<T>(h.beta2);
  const T step_size = static_cast<T>(lr / bc1);
  const T inv_sqrt_bc2 = static_cast<T>(1.0 / std::sqrt(bc2));
  const T eps = static_cast<T>(h.eps);

  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto w = slots[i].value->array();
    const auto g = slots[i].grad->array();
    auto m = state.first_moment[i].array();
    auto v = state.second_moment[i].array();
    w *= decay;
    m = b1 * m + (T(1) - b1) * g;
    v = b2 * v + (T(1) - b2) * g * g;
    w -= step_size * m / (v.sqrt() * inv_sqrt_bc2 + eps);
  }
}

template void adamw_step<float>(std::span<const ParamSlot<float>>, AdamWState<float>&, double);
template void adamw_step<double>(std::span<const ParamSlot<double>>, AdamWState<double>&, double);

}  // namespace wakegnn::nn
