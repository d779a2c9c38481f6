#pragma once

#include "glue/core/image.hpp"
#include "glue/nn/linear.hpp"
#include "glue/nn/positional.hpp"
#include "glue/perception/backends.hpp"

namespace glue::perception {

struct ToyVitConfig {
  int grid = 14;         // n: patches per side
  int patch = 4;         // pixels per patch side at native resolution
  int dim = 768;         // N_f
  double pe_scale = 1.0;  // 0 disables position mixing
  bool with_cls = true;
};

// Patchify -> linear projection -> fixed sinusoidal position mixing. The CLS
// token is a linear head over the mean patch feature. Deterministic; all
// learnable state lives in two Linear layers.
template <typename S>
class ToyVitEncoder {
 public:
  explicit ToyVitEncoder(const ToyVitConfig& cfg = {}) : cfg_(cfg) {
    proj_.resize(cfg.patch * cfg.patch * 3, cfg.dim);
    if (cfg.with_cls) cls_head_.resize(cfg.dim, cfg.dim);
    if (cfg.pe_scale != 0.0) pe_ = nn::grid_pe_table<S>(cfg.grid, cfg.dim, cfg.pe_scale);
  }

  const ToyVitConfig& config() const { return cfg_; }
  int native_resolution() const { return cfg_.grid * cfg_.patch; }

  void init(Rng& rng) {
    proj_.init(rng);
    if (cfg_.with_cls) cls_head_.init(rng);
  }

  nn::ParamList<S> params(const std::string& prefix) {
    nn::ParamList<S> out;
    proj_.register_params(out, prefix + ".proj");
    if (cfg_.with_cls) cls_head_.register_params(out, prefix + ".cls");
    return out;
  }

  // (grid^2 x patch*patch*3), rows in row-major patch order; pixel values
  // are the [0,1] floats of the native-resolution image.
  nn::MatX<S> patchify(const FloatImage& image) const {
    const int res = native_resolution();
    require(image.height == res && image.width == res, ErrorCode::resolution_mismatch,
            "toy encoder: expected " + std::to_string(res) + "x" + std::to_string(res) +
                " input, got " + std::to_string(image.height) + "x" + std::to_string(image.width));
    const int n = cfg_.grid, p = cfg_.patch;
    nn::MatX<S> x(n * n, p * p * 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Eigen::Index col = 0;
        auto row = x.row(i * n + j);
        for (int pr = 0; pr < p; ++pr)
          for (int pc = 0; pc < p; ++pc) {
            const float* px = image.pixel(i * p + pr, j * p + pc);
            row(col++) = static_cast<S>(px[0]);
            row(col++) = static_cast<S>(px[1]);
            row(col++) = static_cast<S>(px[2]);
          }
      }
    return x;
  }

  struct Output {
    nn::MatX<S> patches;  // (grid^2 x dim)
    nn::VecX<S> cls;      // empty when with_cls is false
  };

  Output encode(const FloatImage& image) const {
    Output out;
    nn::MatX<S> x = patchify(image);
    out.patches = proj_.forward(x);
    if (cfg_.pe_scale != 0.0) out.patches += pe_;
    if (cfg_.with_cls) {
      nn::MatX<S> mean = out.patches.colwise().mean();
      out.cls = cls_head_.forward(mean).row(0).transpose();
    }
    return out;
  }

  struct BatchCache {
    nn::MatX<S> x;     // ((B*grid^2) x in_dim)
    nn::MatX<S> mean;  // (B x dim), post-PE patch mean
    int batch = 0;
  };

  // Training path: x_all is the stacked patchify of B images. Outputs stacked
  // patch features and per-sample CLS rows.
  void forward_batch(const nn::MatX<S>& x_all, int batch, nn::MatX<S>& patches, nn::MatX<S>& cls,
                     BatchCache& cache) const {
    const int np = cfg_.grid * cfg_.grid;
    require(batch > 0 && x_all.rows() == static_cast<Eigen::Index>(batch) * np,
            ErrorCode::dimension_mismatch, "toy encoder: bad stacked batch");
    cache.x = x_all;
    cache.batch = batch;
    patches = proj_.forward(x_all);
    if (cfg_.pe_scale != 0.0)
      for (int b = 0; b < batch; ++b) patches.middleRows(b * np, np) += pe_;
    if (cfg_.with_cls) {
      cache.mean.resize(batch, cfg_.dim);
      const S inv = static_cast<S>(1.0 / np);
      for (int b = 0; b < batch; ++b)
        cache.mean.row(b) = patches.middleRows(b * np, np).colwise().sum() * inv;
      cls = cls_head_.forward(cache.mean);
    }
  }

  void backward_batch(const nn::MatX<S>& d_patches, const nn::MatX<S>& d_cls, BatchCache& cache) {
    const int np = cfg_.grid * cfg_.grid;
    nn::MatX<S> d_total = d_patches;
    if (cfg_.with_cls && d_cls.size() > 0) {
      nn::MatX<S> d_mean = cls_head_.backward(cache.mean, d_cls);
      const S inv = static_cast<S>(1.0 / np);
      for (int b = 0; b < cache.batch; ++b)
        d_total.middleRows(b * np, np).rowwise() += d_mean.row(b) * inv;
    }
    proj_.backward(cache.x, d_total);  // input grad discarded: images are leaves
  }

  nn::Linear<S>& projection() { return proj_; }
  nn::Linear<S>& cls_head() { return cls_head_; }

 private:
  ToyVitConfig cfg_;
  nn::Linear<S> proj_;
  nn::Linear<S> cls_head_;
  nn::MatX<S> pe_;
};

// PatchEncoderBackend adapter over a double-precision toy encoder; this is
// the default backend for semantic mapping and hermetic tests.
class ToyPatchEncoderBackend : public PatchEncoderBackend {
 public:
  ToyPatchEncoderBackend(const ToyVitConfig& cfg, uint64_t init_seed) : enc_(cfg) {
    Rng rng(init_seed);
    enc_.init(rng);
  }

  explicit ToyPatchEncoderBackend(ToyVitEncoder<double> enc) : enc_(std::move(enc)) {}

  int native_resolution() const override { return enc_.native_resolution(); }
  int grid_size() const override { return enc_.config().grid; }
  int feature_dim() const override { return enc_.config().dim; }
  bool has_cls() const override { return enc_.config().with_cls; }

  PatchEncoderOutput encode(const FloatImage& image) const override {
    auto out = enc_.encode(image);
    PatchEncoderOutput result;
    result.patch_features = std::move(out.patches);
    if (enc_.config().with_cls) result.cls_token = std::move(out.cls);
    result.grid = enc_.config().grid;
    result.dim = enc_.config().dim;
    return result;
  }

  ToyVitEncoder<double>& encoder() { return enc_; }

 private:
  ToyVitEncoder<double> enc_;
};

}  // namespace glue::perception
