#include "glue/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace glue {

FloatImage to_float(const Frame& frame) {
  FloatImage out(frame.height, frame.width);
  const size_t n = frame.rgb.size();
  for (size_t i = 0; i < n; ++i) out.rgb[i] = frame.rgb[i] * (1.0f / 255.0f);
  return out;
}

FloatImage resize_area(const FloatImage& src, int out_height, int out_width) {
  require(out_height > 0 && out_width > 0, ErrorCode::invalid_argument, "resize_area: bad output size");
  if (out_height == src.height && out_width == src.width) return src;
  FloatImage out(out_height, out_width);
  const double sr = static_cast<double>(src.height) / out_height;
  const double sc = static_cast<double>(src.width) / out_width;
  for (int r = 0; r < out_height; ++r) {
    const double r0 = r * sr, r1 = (r + 1) * sr;
    const int ir0 = static_cast<int>(std::floor(r0));
    const int ir1 = std::min(src.height - 1, static_cast<int>(std::ceil(r1)) - 1);
    for (int c = 0; c < out_width; ++c) {
      const double c0 = c * sc, c1 = (c + 1) * sc;
      const int ic0 = static_cast<int>(std::floor(c0));
      const int ic1 = std::min(src.width - 1, static_cast<int>(std::ceil(c1)) - 1);
      double acc[3] = {0, 0, 0};
      double area = 0;
      for (int ir = ir0; ir <= ir1; ++ir) {
        const double wr = std::min<double>(ir + 1, r1) - std::max<double>(ir, r0);
        for (int ic = ic0; ic <= ic1; ++ic) {
          const double wc = std::min<double>(ic + 1, c1) - std::max<double>(ic, c0);
          const double w = wr * wc;
          const float* p = src.pixel(ir, ic);
          acc[0] += w * p[0];
          acc[1] += w * p[1];
          acc[2] += w * p[2];
          area += w;
        }
      }
      float* q = out.pixel(r, c);
      q[0] = static_cast<float>(acc[0] / area);
      q[1] = static_cast<float>(acc[1] / area);
      q[2] = static_cast<float>(acc[2] / area);
    }
  }
  return out;
}

FloatImage resize_nearest(const FloatImage& src, int out_height, int out_width) {
  require(out_height > 0 && out_width > 0, ErrorCode::invalid_argument, "resize_nearest: bad output size");
  FloatImage out(out_height, out_width);
  const double sr = static_cast<double>(src.height) / out_height;
  const double sc = static_cast<double>(src.width) / out_width;
  for (int r = 0; r < out_height; ++r) {
    const int ir = std::min(src.height - 1, static_cast<int>(std::floor((r + 0.5) * sr)));
    for (int c = 0; c < out_width; ++c) {
      const int ic = std::min(src.width - 1, static_cast<int>(std::floor((c + 0.5) * sc)));
      const float* p = src.pixel(ir, ic);
      float* q = out.pixel(r, c);
      q[0] = p[0];
      q[1] = p[1];
      q[2] = p[2];
    }
  }
  return out;
}

template <typename Img>
static Img crop_impl(const Img& src, int r0, int c0, int h, int w) {
  require(r0 >= 0 && c0 >= 0 && h > 0 && w > 0 && r0 + h <= src.height && c0 + w <= src.width,
          ErrorCode::invalid_argument, "crop: region outside image");
  Img out(h, w);
  for (int r = 0; r < h; ++r) {
    const auto* p = src.pixel(r0 + r, c0);
    auto* q = out.pixel(r, 0);
    std::copy(p, p + static_cast<size_t>(w) * 3, q);
  }
  return out;
}

FloatImage crop(const FloatImage& src, int r0, int c0, int h, int w) {
  return crop_impl(src, r0, c0, h, w);
}

Frame crop(const Frame& src, int r0, int c0, int h, int w) {
  return crop_impl(src, r0, c0, h, w);
}

}  // namespace glue
