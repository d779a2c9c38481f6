#pragma once

#include "glue/perception/backends.hpp"

namespace glue::extract {

// Full-resolution per-pixel semantic feature tensor, represented as the
// per-sub-image encoder grids plus the bilinear-upsampling rule; features
// are materialized per pixel on demand (the dense H x W x N_f tensor of a
// 512x512 frame at 768 dims would be ~1.6 GB).
struct PixelFeatureMap {
  struct SubImage {
    int r0 = 0, c0 = 0, h = 0, w = 0;  // pixel region within the frame
    nn::MatD grid;                     // (n*n x dim) encoder output
    int n = 0;
  };

  int height = 0;
  int width = 0;
  int dim = 0;
  int n_grid = 0;
  std::vector<SubImage> subs;  // row-major sub-image order
  std::vector<int> sub_of_row, sub_of_col;  // pixel -> sub-image row/col index

  const SubImage& sub_at(int r, int c) const {
    return subs[static_cast<size_t>(sub_of_row[r]) * n_grid + sub_of_col[c]];
  }

  // Bilinear upsample (align-corners-false, pixel-center convention) of the
  // owning sub-image's grid at pixel (r, c).
  nn::VecD feature_at(int r, int c) const;

  // Stacked features for a pixel list.
  nn::MatD gather(const std::vector<std::pair<int, int>>& pixels) const;
};

// Splits the frame into n_grid^2 sub-images (even integer partition,
// remainders spread across leading sub-images), encodes each at the
// encoder's native resolution, and keeps the grids for on-demand bilinear
// upsampling.
PixelFeatureMap build_pixel_feature_map(const Frame& frame,
                                        const perception::PatchEncoderBackend& encoder,
                                        int n_grid);

// Even integer partition boundaries: n segments over `total`, remainders on
// leading segments. Returns n+1 offsets.
std::vector<int> partition_offsets(int total, int n);

}  // namespace glue::extract
