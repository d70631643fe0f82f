#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::nn {

/// Dense row-major matrix. Rows are vertices, columns are channels.
template <typename T>
using Tensor2 = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
bool all_finite(const Tensor2<T>& t) {
  return t.allFinite();
}

template <typename T>
void require_shape(const Tensor2<T>& t, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (t.rows() != rows || t.cols() != cols) {
    throw DimensionError(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                         std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
  }
}

template <typename T>
void require_same_shape(const Tensor2<T>& a, const Tensor2<T>& b, const std::string& what) {
  require_shape(b, a.rows(), a.cols(), what);
}

}  // namespace wakegnn::nn
