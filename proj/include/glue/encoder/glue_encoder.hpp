#pragma once

#include "glue/nn/fusion.hpp"
#include "glue/perception/toy_encoder.hpp"
#include "glue/types.hpp"

namespace glue::encoder {

template <typename S>
struct GlobalFeatures {
  nn::MatX<S> patches;  // (196 x 768)
  nn::VecX<S> cls;      // (768)
};

template <typename S>
struct LocalGridMap {
  int side = 28;
  nn::MatX<S> grid;  // (side*side x dim), row index = x*side + y
};

// Splits a stacked (197 x d) token matrix into (CLS, 196 patch tokens);
// token 0 is CLS.
template <typename S>
GlobalFeatures<S> split_global_tokens(const nn::MatX<S>& tokens) {
  require(tokens.rows() == 197, ErrorCode::dimension_mismatch,
          "split_global_tokens: expected 197 tokens");
  GlobalFeatures<S> out;
  out.cls = tokens.row(0).transpose();
  out.patches = tokens.bottomRows(196);
  return out;
}

// Whole-frame encoding with the learnable encoder; the frame is resized to
// the encoder's native resolution here, grid math elsewhere always uses
// original frame dimensions.
template <typename S>
GlobalFeatures<S> encode_global(const Frame& frame,
                                const perception::ToyVitEncoder<S>& learnable_encoder) {
  require(learnable_encoder.config().with_cls && learnable_encoder.config().grid == 14,
          ErrorCode::invalid_argument, "encode_global: needs the 14x14 CLS-bearing profile");
  const FloatImage native = resize_area(
      to_float(frame), learnable_encoder.native_resolution(), learnable_encoder.native_resolution());
  auto enc = learnable_encoder.encode(native);
  nn::MatX<S> tokens(197, enc.patches.cols());
  tokens.row(0) = enc.cls.transpose();
  tokens.bottomRows(196) = enc.patches;
  return split_global_tokens<S>(tokens);
}

// Grid-cell coordinates of tracked keypoints on the 28x28 observation grid:
// x = floor(row / (H/28)), y = floor(col / (W/28)), clamped; visibility is
// inherited (states must carry binary visibility).
std::vector<KeyPatch> locate_key_patches(const std::vector<KeypointState>& states,
                                         int frame_height, int frame_width);

// Pixel region (row/col span) of one 28x28 grid cell; the half-open ranges
// cover exactly the pixels mapping to that cell under the floor rule.
struct CellRegion {
  int row_begin = 0, row_end = 0, col_begin = 0, col_end = 0;
};
CellRegion key_patch_cell_region(int x, int y, int frame_height, int frame_width);

// Four quadrants (row-major: TL, TR, BL, BR), each resized to the frozen
// encoder's native resolution (nearest, cell-aligned), encoded without CLS,
// and placed as 14x14 blocks of the 28x28 grid. Frame dims must be even.
template <typename S>
LocalGridMap<S> build_local_grid_map(const Frame& frame,
                                     const perception::ToyVitEncoder<S>& frozen_encoder) {
  require(frame.valid(), ErrorCode::invalid_argument, "build_local_grid_map: invalid frame");
  require(frame.height % 2 == 0 && frame.width % 2 == 0, ErrorCode::invalid_argument,
          "build_local_grid_map: frame dimensions must be even");
  const int n = frozen_encoder.config().grid;
  require(n == 14, ErrorCode::invalid_argument, "build_local_grid_map: needs the 14x14 profile");
  const int native = frozen_encoder.native_resolution();
  const int hh = frame.height / 2, hw = frame.width / 2;

  LocalGridMap<S> map;
  map.side = 2 * n;
  map.grid.setZero(map.side * map.side, frozen_encoder.config().dim);
  const FloatImage whole = to_float(frame);
  for (int qr = 0; qr < 2; ++qr)
    for (int qc = 0; qc < 2; ++qc) {
      const FloatImage quadrant = crop(whole, qr * hh, qc * hw, hh, hw);
      const FloatImage at_native = resize_nearest(quadrant, native, native);
      auto enc = frozen_encoder.encode(at_native);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          map.grid.row((qr * n + i) * map.side + (qc * n + j)) = enc.patches.row(i * n + j);
    }
  return map;
}

// Row i = map[x_i, y_i] for visible patches, zero vector for invisible ones.
// Duplicate cells are permitted.
template <typename S>
nn::MatX<S> gather_local_features(const LocalGridMap<S>& map,
                                  const std::vector<KeyPatch>& patches) {
  nn::MatX<S> out = nn::MatX<S>::Zero(static_cast<Eigen::Index>(patches.size()), map.grid.cols());
  for (size_t i = 0; i < patches.size(); ++i) {
    const KeyPatch& p = patches[i];
    require(p.x >= 0 && p.x < map.side && p.y >= 0 && p.y < map.side,
            ErrorCode::dimension_mismatch, "gather_local_features: patch outside grid");
    if (p.visible) out.row(static_cast<Eigen::Index>(i)) = map.grid.row(p.x * map.side + p.y);
  }
  return out;
}

// W = [F' (256), F_CLS (768), S (7)] = 1031.
template <typename S>
nn::VecX<S> assemble_condition(const nn::VecX<S>& fprime, const nn::VecX<S>& cls,
                               const nn::VecX<S>& state) {
  require(fprime.size() == 256, ErrorCode::dimension_mismatch,
          "assemble_condition: F' must be 256-dim");
  require(cls.size() == 768, ErrorCode::dimension_mismatch,
          "assemble_condition: CLS must be 768-dim");
  require(state.size() == 7, ErrorCode::dimension_mismatch,
          "assemble_condition: state must be 7-dim");
  nn::VecX<S> w(1031);
  w.segment(0, 256) = fprime;
  w.segment(256, 768) = cls;
  w.segment(1024, 7) = state;
  return w;
}

template <typename S>
struct GlueEncoderConfig {
  perception::ToyVitConfig global_encoder{14, 4, 768, 1.0, true};
  perception::ToyVitConfig local_encoder{14, 4, 768, 1.0, false};
  nn::FusionConfig fusion{768, 8, 256, 14, 28, 1.0};
  bool glue_s = false;  // ablation: zero-fill F', keep W layout
};

// The full visual conditioning stack: learnable global encoder, frozen local
// encoder, cross-attention fusion. Evaluation entry point plus raw access
// for the batched training path.
template <typename S>
class GlueEncoder {
 public:
  explicit GlueEncoder(const GlueEncoderConfig<S>& cfg = {})
      : cfg_(cfg), global_(cfg.global_encoder), local_(cfg.local_encoder), fusion_(cfg.fusion) {}

  void init(uint64_t master_seed) {
    Rng g = derive_stream(master_seed, "init.encoder_global");
    global_.init(g);
    Rng l = derive_stream(master_seed, "init.encoder_local");
    local_.init(l);
    Rng f = derive_stream(master_seed, "init.fusion");
    fusion_.init(f);
  }

  const GlueEncoderConfig<S>& config() const { return cfg_; }
  bool glue_s() const { return cfg_.glue_s; }

  perception::ToyVitEncoder<S>& global_encoder() { return global_; }
  const perception::ToyVitEncoder<S>& global_encoder() const { return global_; }
  perception::ToyVitEncoder<S>& local_encoder() { return local_; }
  const perception::ToyVitEncoder<S>& local_encoder() const { return local_; }
  nn::FusionModule<S>& fusion() { return fusion_; }
  const nn::FusionModule<S>& fusion() const { return fusion_; }

  // Trainable parameters: global encoder + fusion. The frozen local encoder
  // is excluded by construction; in glue-s mode fusion is also excluded
  // (initialized but unused).
  nn::ParamList<S> trainable_params() {
    nn::ParamList<S> out = global_.params("encoder_global");
    if (!cfg_.glue_s)
      for (auto& p : fusion_.params()) out.push_back(p);
    return out;
  }

  // Every parameter that belongs in a checkpoint (frozen encoder included;
  // the layout is identical across ablation modes).
  nn::ParamList<S> all_params() {
    nn::ParamList<S> out = global_.params("encoder_global");
    for (auto& p : local_.params("encoder_local")) out.push_back(p);
    for (auto& p : fusion_.params()) out.push_back(p);
    return out;
  }

  // Evaluation path: frame + thresholded key patches + robot state -> W.
  nn::VecX<S> condition(const Frame& frame, const std::vector<KeyPatch>& patches,
                        const std::array<float, 7>& state) const {
    GlobalFeatures<S> global = encode_global<S>(frame, global_);
    nn::VecX<S> fprime = nn::VecX<S>::Zero(cfg_.fusion.d_out);
    if (!cfg_.glue_s) {
      require(!patches.empty(), ErrorCode::invalid_argument, "condition: no key patches");
      const LocalGridMap<S> map = build_local_grid_map<S>(frame, local_);
      const nn::MatX<S> locals = gather_local_features<S>(map, patches);
      std::vector<std::pair<int, int>> coords;
      coords.reserve(patches.size());
      for (const auto& p : patches) coords.push_back({p.x, p.y});
      fprime = fusion_.fuse(global.patches, locals, coords);
    }
    nn::VecX<S> state_vec(7);
    for (int i = 0; i < 7; ++i) state_vec(i) = static_cast<S>(state[i]);
    return assemble_condition<S>(fprime, global.cls, state_vec);
  }

 private:
  GlueEncoderConfig<S> cfg_;
  perception::ToyVitEncoder<S> global_;
  perception::ToyVitEncoder<S> local_;
  nn::FusionModule<S> fusion_;
};

}  // namespace glue::encoder
