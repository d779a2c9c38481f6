#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "glue/nn/tensor.hpp"

namespace glue::nn {

// Fixed 2-D sinusoidal encoding over integer grid coordinates: the first half
// of the channels encodes the row coordinate, the second half the column,
// each as interleaved sin/cos pairs with geometrically spaced frequencies.
template <typename S>
VecX<S> grid_positional_encoding(double row, double col, int dim, double scale = 1.0) {
  VecX<S> pe(dim);
  const int half = dim / 2;
  auto fill = [&](int offset, int n, double pos) {
    const int pairs = n / 2;
    for (int i = 0; i < pairs; ++i) {
      const double freq = std::exp(-std::log(10000.0) * (2.0 * i) / n);
      pe(offset + 2 * i) = static_cast<S>(scale * std::sin(pos * freq));
      pe(offset + 2 * i + 1) = static_cast<S>(scale * std::cos(pos * freq));
    }
    if (n % 2) pe(offset + n - 1) = static_cast<S>(scale * std::sin(pos));
  };
  fill(0, half, row);
  fill(half, dim - half, col);
  return pe;
}

// Row-major flattened PE table for an n x n grid.
template <typename S>
MatX<S> grid_pe_table(int side, int dim, double scale = 1.0) {
  MatX<S> table(side * side, dim);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      table.row(i * side + j) = grid_positional_encoding<S>(i, j, dim, scale).transpose();
  return table;
}

template <typename S>
MatX<S> pe_rows_for_coords(const std::vector<std::pair<int, int>>& coords, int dim,
                           double scale = 1.0) {
  MatX<S> rows(static_cast<Eigen::Index>(coords.size()), dim);
  for (size_t i = 0; i < coords.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) =
        grid_positional_encoding<S>(coords[i].first, coords[i].second, dim, scale).transpose();
  return rows;
}

}  // namespace glue::nn
