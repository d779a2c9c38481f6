#pragma once

#include "glue/nn/tensor.hpp"

namespace glue::nn {

// Dense affine map applied row-wise: Y = X * W + b, X is (rows x in), W is
// (in x out).
template <typename S>
struct Linear {
  MatX<S> w, gw;
  MatX<S> b, gb;  // (out x 1)

  Linear() = default;
  Linear(int in, int out) { resize(in, out); }

  void resize(int in, int out) {
    w.setZero(in, out);
    gw.setZero(in, out);
    b.setZero(out, 1);
    gb.setZero(out, 1);
  }

  void init(Rng& rng) { init_fan_in(w, rng, static_cast<int>(w.rows())); }

  int in_dim() const { return static_cast<int>(w.rows()); }
  int out_dim() const { return static_cast<int>(w.cols()); }

  MatX<S> forward(const MatX<S>& x) const {
    MatX<S> y = x * w;
    y.rowwise() += b.col(0).transpose();
    return y;
  }

  // Accumulates parameter gradients, returns dL/dX.
  MatX<S> backward(const MatX<S>& x, const MatX<S>& dy) {
    gw.noalias() += x.transpose() * dy;
    gb.col(0).noalias() += dy.colwise().sum().transpose();
    return dy * w.transpose();
  }

  void register_params(ParamList<S>& out, const std::string& prefix) {
    out.push_back({prefix + ".w", &w, &gw});
    out.push_back({prefix + ".b", &b, &gb});
  }
};

}  // namespace glue::nn
