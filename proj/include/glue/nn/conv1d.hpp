#pragma once

#include "glue/nn/tensor.hpp"

namespace glue::nn {

template <typename S>
inline S silu(S x) {
  const S sg = S(1) / (S(1) + std::exp(-x));
  return x * sg;
}

template <typename S>
inline S silu_grad(S x) {
  const S sg = S(1) / (S(1) + std::exp(-x));
  return sg * (S(1) + x * (S(1) - sg));
}

// 1-D convolution over (channels x length) inputs via im2col.
template <typename S>
struct Conv1d {
  int c_in = 0, c_out = 0, kernel = 1, stride = 1, pad = 0;
  MatX<S> w, gw;  // (c_out x c_in*kernel)
  MatX<S> b, gb;  // (c_out x 1)

  Conv1d() = default;
  Conv1d(int ci, int co, int k, int s = 1, int p = 0) { resize(ci, co, k, s, p); }

  void resize(int ci, int co, int k, int s = 1, int p = 0) {
    c_in = ci;
    c_out = co;
    kernel = k;
    stride = s;
    pad = p;
    w.setZero(co, ci * k);
    gw.setZero(co, ci * k);
    b.setZero(co, 1);
    gb.setZero(co, 1);
  }

  void init(Rng& rng) { init_fan_in(w, rng, c_in * kernel); }

  int out_len(int len) const { return (len + 2 * pad - kernel) / stride + 1; }

  struct Cache {
    MatX<S> cols;  // (c_in*kernel x L_out)
    int in_len = 0;
  };

  MatX<S> forward(const MatX<S>& x, Cache& cache) const {
    const int len = static_cast<int>(x.cols());
    const int lo = out_len(len);
    cache.in_len = len;
    cache.cols.setZero(c_in * kernel, lo);
    for (int t = 0; t < lo; ++t) {
      const int start = t * stride - pad;
      for (int k = 0; k < kernel; ++k) {
        const int src = start + k;
        if (src < 0 || src >= len) continue;
        cache.cols.block(k * c_in, t, c_in, 1) = x.col(src);
      }
    }
    MatX<S> y = w * cache.cols;
    y.colwise() += b.col(0);
    return y;
  }

  MatX<S> backward(const MatX<S>& dy, const Cache& cache) {
    gw.noalias() += dy * cache.cols.transpose();
    gb.col(0).noalias() += dy.rowwise().sum();
    MatX<S> d_cols = w.transpose() * dy;
    MatX<S> dx = MatX<S>::Zero(c_in, cache.in_len);
    const int lo = static_cast<int>(dy.cols());
    for (int t = 0; t < lo; ++t) {
      const int start = t * stride - pad;
      for (int k = 0; k < kernel; ++k) {
        const int src = start + k;
        if (src < 0 || src >= cache.in_len) continue;
        dx.col(src) += d_cols.block(k * c_in, t, c_in, 1);
      }
    }
    return dx;
  }

  void register_params(ParamList<S>& out, const std::string& prefix) {
    out.push_back({prefix + ".w", &w, &gw});
    out.push_back({prefix + ".b", &b, &gb});
  }
};

}  // namespace glue::nn
