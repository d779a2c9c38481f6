#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "glue/core/error.hpp"
#include "glue/core/rng.hpp"

namespace glue::nn {

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatF = MatX<float>;
using MatD = MatX<double>;
using VecF = VecX<float>;
using VecD = VecX<double>;

// A named view of one parameter matrix and its gradient accumulator.
// Vectors are registered as n x 1 matrices by the owning layer.
template <typename S>
struct ParamRef {
  std::string name;
  MatX<S>* value = nullptr;
  MatX<S>* grad = nullptr;
};

template <typename S>
using ParamList = std::vector<ParamRef<S>>;

template <typename S>
void zero_grads(const ParamList<S>& params) {
  for (const auto& p : params) p.grad->setZero();
}

template <typename S>
size_t param_count(const ParamList<S>& params) {
  size_t n = 0;
  for (const auto& p : params) n += static_cast<size_t>(p.value->size());
  return n;
}

template <typename S>
void fill_normal(MatX<S>& m, Rng& rng, double stddev) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<S>(rng.normal() * stddev);
}

// Kaiming-style scale for a layer with the given fan-in.
template <typename S>
void init_fan_in(MatX<S>& m, Rng& rng, int fan_in) {
  fill_normal(m, rng, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

}  // namespace glue::nn
