#pragma once

#include "glue/nn/conv1d.hpp"
#include "glue/nn/linear.hpp"

namespace glue::nn {

// Sinusoidal embedding of the diffusion step index.
template <typename S>
VecX<S> step_embedding(int k, int dim) {
  VecX<S> e(dim);
  const int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / std::max(1, half - 1));
    e(2 * i) = static_cast<S>(std::sin(k * freq));
    e(2 * i + 1) = static_cast<S>(std::cos(k * freq));
  }
  if (dim % 2) e(dim - 1) = S(0);
  return e;
}

// Conditional residual block: conv -> SiLU -> feature-wise scale/shift from
// the condition -> conv -> SiLU, with a projected skip connection.
template <typename S>
struct CondResBlock {
  Conv1d<S> conv1, conv2, skip;
  Linear<S> film;  // cond -> (2*c_out)
  bool has_skip = false;
  int c_out = 0;

  void resize(int ci, int co, int cond_dim) {
    c_out = co;
    conv1.resize(ci, co, 3, 1, 1);
    conv2.resize(co, co, 3, 1, 1);
    film.resize(cond_dim, 2 * co);
    has_skip = ci != co;
    if (has_skip) skip.resize(ci, co, 1);
  }

  void init(Rng& rng) {
    conv1.init(rng);
    conv2.init(rng);
    film.init(rng);
    if (has_skip) skip.init(rng);
  }

  struct Cache {
    typename Conv1d<S>::Cache c1, c2, cs;
    MatX<S> h1, a1, f, h2;
    VecX<S> scale;
  };

  MatX<S> forward(const MatX<S>& x, const VecX<S>& cond, Cache& cc) const {
    cc.h1 = conv1.forward(x, cc.c1);
    cc.a1 = cc.h1.unaryExpr([](S v) { return silu(v); });
    MatX<S> ss = film.forward(cond.transpose());  // (1 x 2*c_out)
    cc.scale = ss.row(0).segment(0, c_out).transpose();
    VecX<S> shift = ss.row(0).segment(c_out, c_out).transpose();
    cc.f = cc.a1;
    cc.f.array().colwise() *= (cc.scale.array() + S(1));
    cc.f.colwise() += shift;
    cc.h2 = conv2.forward(cc.f, cc.c2);
    MatX<S> out = cc.h2.unaryExpr([](S v) { return silu(v); });
    if (has_skip)
      out += skip.forward(x, cc.cs);
    else
      out += x;
    return out;
  }

  // Returns dx; adds the condition gradient into d_cond.
  MatX<S> backward(const MatX<S>& dy, const VecX<S>& cond, Cache& cc, VecX<S>& d_cond) {
    MatX<S> dh2 = dy.cwiseProduct(cc.h2.unaryExpr([](S v) { return silu_grad(v); }));
    MatX<S> df = conv2.backward(dh2, cc.c2);

    MatX<S> d_ss(1, 2 * c_out);
    d_ss.row(0).segment(0, c_out) = df.cwiseProduct(cc.a1).rowwise().sum().transpose();
    d_ss.row(0).segment(c_out, c_out) = df.rowwise().sum().transpose();
    d_cond.noalias() += film.backward(cond.transpose(), d_ss).row(0).transpose();

    MatX<S> da1 = df;
    da1.array().colwise() *= (cc.scale.array() + S(1));
    MatX<S> dh1 = da1.cwiseProduct(cc.h1.unaryExpr([](S v) { return silu_grad(v); }));
    MatX<S> dx = conv1.backward(dh1, cc.c1);
    if (has_skip)
      dx += skip.backward(dy, cc.cs);
    else
      dx += dy;
    return dx;
  }

  void register_params(ParamList<S>& out, const std::string& prefix) {
    conv1.register_params(out, prefix + ".conv1");
    conv2.register_params(out, prefix + ".conv2");
    film.register_params(out, prefix + ".film");
    if (has_skip) skip.register_params(out, prefix + ".skip");
  }
};

struct UNetConfig {
  int in_channels = 3;
  int base_width = 64;   // widths are (base, 2*base, 4*base)
  int cond_dim = 1031;   // external condition width
  int step_embed_dim = 64;
  int step_mlp_dim = 128;
};

// 3-level 1-D convolutional encoder-decoder over the chunk time axis with
// condition injection at every level and a zero-initialized output head.
template <typename S>
class UNet1d {
 public:
  explicit UNet1d(const UNetConfig& cfg = {}) : cfg_(cfg) {
    const int w1 = cfg.base_width, w2 = 2 * w1, w3 = 4 * w1;
    const int cd = cfg.step_mlp_dim + cfg.cond_dim;
    step_mlp1_.resize(cfg.step_embed_dim, cfg.step_mlp_dim);
    step_mlp2_.resize(cfg.step_mlp_dim, cfg.step_mlp_dim);
    enc1_.resize(cfg.in_channels, w1, cd);
    down1_.resize(w1, w1, 3, 2, 1);
    enc2_.resize(w1, w2, cd);
    down2_.resize(w2, w2, 3, 2, 1);
    mid_.resize(w2, w3, cd);
    up1_.resize(w3, w2, 3, 1, 1);
    dec1_.resize(w2 + w2, w2, cd);
    up2_.resize(w2, w1, 3, 1, 1);
    dec2_.resize(w1 + w1, w1, cd);
    head_.resize(w1, cfg.in_channels, 1);
  }

  const UNetConfig& config() const { return cfg_; }

  void init(Rng& rng, bool zero_final = true) {
    step_mlp1_.init(rng);
    step_mlp2_.init(rng);
    enc1_.init(rng);
    down1_.init(rng);
    enc2_.init(rng);
    down2_.init(rng);
    mid_.init(rng);
    up1_.init(rng);
    dec1_.init(rng);
    up2_.init(rng);
    dec2_.init(rng);
    if (!zero_final) head_.init(rng);
    // zero_final: leave the head at zero so the predictor starts at the
    // identity denoiser.
  }

  ParamList<S> params() {
    ParamList<S> out;
    step_mlp1_.register_params(out, "unet.step1");
    step_mlp2_.register_params(out, "unet.step2");
    enc1_.register_params(out, "unet.enc1");
    down1_.register_params(out, "unet.down1");
    enc2_.register_params(out, "unet.enc2");
    down2_.register_params(out, "unet.down2");
    mid_.register_params(out, "unet.mid");
    up1_.register_params(out, "unet.up1");
    dec1_.register_params(out, "unet.dec1");
    up2_.register_params(out, "unet.up2");
    dec2_.register_params(out, "unet.dec2");
    head_.register_params(out, "unet.head");
    return out;
  }

  struct Cache {
    VecX<S> emb_in, emb_h1, emb_a1, emb_h2, cond;
    typename CondResBlock<S>::Cache e1, e2, m, d1, d2;
    typename Conv1d<S>::Cache cd1, cd2, cu1, cu2, ch;
    MatX<S> x_e1, x_d1, x_e2, x_d2, x_m, up1_in, up1_out, cat1, x_dec1, up2_in, up2_out, cat2,
        x_dec2;
  };

  // x is (in_channels x length); cond_ext is the external condition vector.
  MatX<S> forward(const MatX<S>& x, int k, const VecX<S>& cond_ext, Cache& cc) const {
    require(static_cast<int>(x.rows()) == cfg_.in_channels, ErrorCode::dimension_mismatch,
            "unet: channel mismatch");
    require(static_cast<int>(cond_ext.size()) == cfg_.cond_dim, ErrorCode::dimension_mismatch,
            "unet: condition width mismatch");
    require(x.cols() % 4 == 0, ErrorCode::dimension_mismatch,
            "unet: length must be divisible by 4");

    cc.emb_in = step_embedding<S>(k, cfg_.step_embed_dim);
    cc.emb_h1 = step_mlp1_.forward(cc.emb_in.transpose()).row(0).transpose();
    cc.emb_a1 = cc.emb_h1.unaryExpr([](S v) { return silu(v); });
    cc.emb_h2 = step_mlp2_.forward(cc.emb_a1.transpose()).row(0).transpose();
    cc.cond.resize(cfg_.step_mlp_dim + cfg_.cond_dim);
    cc.cond.segment(0, cfg_.step_mlp_dim) = cc.emb_h2;
    cc.cond.segment(cfg_.step_mlp_dim, cfg_.cond_dim) = cond_ext;

    cc.x_e1 = enc1_.forward(x, cc.cond, cc.e1);
    cc.x_d1 = down1_.forward(cc.x_e1, cc.cd1);
    cc.x_e2 = enc2_.forward(cc.x_d1, cc.cond, cc.e2);
    cc.x_d2 = down2_.forward(cc.x_e2, cc.cd2);
    cc.x_m = mid_.forward(cc.x_d2, cc.cond, cc.m);

    cc.up1_in = upsample2(cc.x_m);
    cc.up1_out = up1_.forward(cc.up1_in, cc.cu1);
    cc.cat1.resize(cc.up1_out.rows() + cc.x_e2.rows(), cc.up1_out.cols());
    cc.cat1 << cc.up1_out, cc.x_e2;
    cc.x_dec1 = dec1_.forward(cc.cat1, cc.cond, cc.d1);

    cc.up2_in = upsample2(cc.x_dec1);
    cc.up2_out = up2_.forward(cc.up2_in, cc.cu2);
    cc.cat2.resize(cc.up2_out.rows() + cc.x_e1.rows(), cc.up2_out.cols());
    cc.cat2 << cc.up2_out, cc.x_e1;
    cc.x_dec2 = dec2_.forward(cc.cat2, cc.cond, cc.d2);

    return head_.forward(cc.x_dec2, cc.ch);
  }

  // Accumulates parameter grads; optionally returns dL/d(cond_ext).
  void backward(const MatX<S>& dy, Cache& cc, VecX<S>* d_cond_ext = nullptr) {
    VecX<S> d_cond = VecX<S>::Zero(cc.cond.size());

    MatX<S> d_dec2 = head_.backward(dy, cc.ch);
    MatX<S> d_cat2 = dec2_.backward(d_dec2, cc.cond, cc.d2, d_cond);
    MatX<S> d_up2out = d_cat2.topRows(cc.up2_out.rows());
    MatX<S> d_xe1_skip = d_cat2.bottomRows(cc.x_e1.rows());
    MatX<S> d_up2in = up2_.backward(d_up2out, cc.cu2);
    MatX<S> d_dec1 = downsample_grad(d_up2in);

    MatX<S> d_cat1 = dec1_.backward(d_dec1, cc.cond, cc.d1, d_cond);
    MatX<S> d_up1out = d_cat1.topRows(cc.up1_out.rows());
    MatX<S> d_xe2_skip = d_cat1.bottomRows(cc.x_e2.rows());
    MatX<S> d_up1in = up1_.backward(d_up1out, cc.cu1);
    MatX<S> d_m = downsample_grad(d_up1in);

    MatX<S> d_xd2 = mid_.backward(d_m, cc.cond, cc.m, d_cond);
    MatX<S> d_xe2 = down2_.backward(d_xd2, cc.cd2) + d_xe2_skip;
    MatX<S> d_xd1 = enc2_.backward(d_xe2, cc.cond, cc.e2, d_cond);
    MatX<S> d_xe1 = down1_.backward(d_xd1, cc.cd1) + d_xe1_skip;
    enc1_.backward(d_xe1, cc.cond, cc.e1, d_cond);

    // step-embedding MLP
    VecX<S> d_emb_h2 = d_cond.segment(0, cfg_.step_mlp_dim);
    MatX<S> d_a1 = step_mlp2_.backward(cc.emb_a1.transpose(), d_emb_h2.transpose());
    VecX<S> d_h1 =
        d_a1.row(0).transpose().cwiseProduct(cc.emb_h1.unaryExpr([](S v) { return silu_grad(v); }));
    step_mlp1_.backward(cc.emb_in.transpose(), d_h1.transpose());

    if (d_cond_ext) *d_cond_ext = d_cond.segment(cfg_.step_mlp_dim, cfg_.cond_dim);
  }

 private:
  static MatX<S> upsample2(const MatX<S>& x) {
    MatX<S> y(x.rows(), x.cols() * 2);
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      y.col(2 * t) = x.col(t);
      y.col(2 * t + 1) = x.col(t);
    }
    return y;
  }

  static MatX<S> downsample_grad(const MatX<S>& dy) {
    MatX<S> dx(dy.rows(), dy.cols() / 2);
    for (Eigen::Index t = 0; t < dx.cols(); ++t) dx.col(t) = dy.col(2 * t) + dy.col(2 * t + 1);
    return dx;
  }

  UNetConfig cfg_;
  Linear<S> step_mlp1_, step_mlp2_;
  CondResBlock<S> enc1_, enc2_, mid_, dec1_, dec2_;
  Conv1d<S> down1_, down2_, up1_, up2_, head_;
};

}  // namespace glue::nn
