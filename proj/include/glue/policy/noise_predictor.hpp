#pragma once

#include "glue/nn/unet1d.hpp"
#include "glue/policy/schedule.hpp"

namespace glue::policy {

// eps_theta(W, A_k, k): chunk-shaped noise estimate from the conditional
// 1-D U-Net. Chunks are (H x D_a) row-per-timestep; internally the U-Net
// sees (D_a x H).
template <typename S>
class NoisePredictor {
 public:
  NoisePredictor(int horizon, int action_dim, int cond_dim = 1031,
                 const nn::UNetConfig& unet_cfg = make_unet_config(3, 1031))
      : horizon_(horizon), action_dim_(action_dim), cond_dim_(cond_dim), unet_(unet_cfg) {
    require(horizon >= 4 && horizon % 4 == 0, ErrorCode::invalid_argument,
            "noise predictor: horizon must be a positive multiple of 4");
  }

  static nn::UNetConfig make_unet_config(int action_dim, int cond_dim) {
    nn::UNetConfig cfg;
    cfg.in_channels = action_dim;
    cfg.cond_dim = cond_dim;
    return cfg;
  }

  int horizon() const { return horizon_; }
  int action_dim() const { return action_dim_; }
  int cond_dim() const { return cond_dim_; }

  void init(Rng& rng, bool zero_final = true) { unet_.init(rng, zero_final); }
  nn::ParamList<S> params() { return unet_.params(); }

  using Cache = typename nn::UNet1d<S>::Cache;

  nn::MatX<S> predict(const nn::VecX<S>& condition, const nn::MatX<S>& noised_chunk, int k,
                      Cache& cache) const {
    require(condition.size() == cond_dim_, ErrorCode::dimension_mismatch,
            "predict_noise: condition width mismatch");
    require(noised_chunk.rows() == horizon_ && noised_chunk.cols() == action_dim_,
            ErrorCode::dimension_mismatch, "predict_noise: chunk shape mismatch");
    nn::MatX<S> x = noised_chunk.transpose();
    return unet_.forward(x, k, condition, cache).transpose();
  }

  nn::MatX<S> predict(const nn::VecX<S>& condition, const nn::MatX<S>& noised_chunk, int k) const {
    Cache cache;
    return predict(condition, noised_chunk, k, cache);
  }

  // d_out is (H x D_a); parameter grads accumulate, condition grad optional.
  void backward(const nn::MatX<S>& d_out, Cache& cache, nn::VecX<S>* d_condition = nullptr) {
    nn::MatX<S> d = d_out.transpose();
    unet_.backward(d, cache, d_condition);
  }

 private:
  int horizon_, action_dim_, cond_dim_;
  nn::UNet1d<S> unet_;
};

}  // namespace glue::policy
