#pragma once

#include <cstdint>
#include <vector>

#include "glue/core/error.hpp"

namespace glue {

// Interleaved row-major 8-bit RGB.
struct Frame {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> rgb;

  Frame() = default;
  Frame(int h, int w) : height(h), width(w), rgb(static_cast<size_t>(h) * w * 3, 0) {}

  uint8_t* pixel(int r, int c) { return rgb.data() + (static_cast<size_t>(r) * width + c) * 3; }
  const uint8_t* pixel(int r, int c) const {
    return rgb.data() + (static_cast<size_t>(r) * width + c) * 3;
  }
  bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }
  bool valid() const { return height > 0 && width > 0 && rgb.size() == static_cast<size_t>(height) * width * 3; }
};

// Interleaved row-major float RGB, values in [0,1] by convention (pixel/255).
struct FloatImage {
  int height = 0;
  int width = 0;
  std::vector<float> rgb;

  FloatImage() = default;
  FloatImage(int h, int w) : height(h), width(w), rgb(static_cast<size_t>(h) * w * 3, 0.f) {}

  float* pixel(int r, int c) { return rgb.data() + (static_cast<size_t>(r) * width + c) * 3; }
  const float* pixel(int r, int c) const {
    return rgb.data() + (static_cast<size_t>(r) * width + c) * 3;
  }
};

FloatImage to_float(const Frame& frame);

// Exact area-weighted (box) resampling; used for the global-encoder path and
// the semantic-mapping path.
FloatImage resize_area(const FloatImage& src, int out_height, int out_width);

// Nearest resampling with pixel-center convention: out (r,c) samples
// src(floor((r+0.5)*sh/oh), floor((c+0.5)*sw/ow)). Every output pixel samples
// strictly inside its own cell when the image is later read as a patch grid,
// which keeps grid-cell features local to the cell's source pixels.
FloatImage resize_nearest(const FloatImage& src, int out_height, int out_width);

FloatImage crop(const FloatImage& src, int r0, int c0, int h, int w);
Frame crop(const Frame& src, int r0, int c0, int h, int w);

}  // namespace glue
