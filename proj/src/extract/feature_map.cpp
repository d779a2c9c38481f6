#include "glue/extract/feature_map.hpp"

#include <cmath>

namespace glue::extract {

std::vector<int> partition_offsets(int total, int n) {
  std::vector<int> offsets(n + 1, 0);
  const int base = total / n;
  const int rem = total % n;
  for (int i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + base + (i < rem ? 1 : 0);
  return offsets;
}

nn::VecD PixelFeatureMap::feature_at(int r, int c) const {
  const SubImage& sub = sub_at(r, c);
  const int n = sub.n;
  auto axis = [&](int local, int extent) {
    double u = (local + 0.5) * n / extent - 0.5;
    u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    const int i0 = std::min(n - 1, static_cast<int>(std::floor(u)));
    const int i1 = std::min(n - 1, i0 + 1);
    return std::tuple<int, int, double>(i0, i1, u - i0);
  };
  const auto [i0, i1, tr] = axis(r - sub.r0, sub.h);
  const auto [j0, j1, tc] = axis(c - sub.c0, sub.w);
  return (1 - tr) * (1 - tc) * sub.grid.row(i0 * n + j0).transpose() +
         (1 - tr) * tc * sub.grid.row(i0 * n + j1).transpose() +
         tr * (1 - tc) * sub.grid.row(i1 * n + j0).transpose() +
         tr * tc * sub.grid.row(i1 * n + j1).transpose();
}

nn::MatD PixelFeatureMap::gather(const std::vector<std::pair<int, int>>& pixels) const {
  nn::MatD out(static_cast<Eigen::Index>(pixels.size()), dim);
  for (size_t i = 0; i < pixels.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        feature_at(pixels[i].first, pixels[i].second).transpose();
  return out;
}

PixelFeatureMap build_pixel_feature_map(const Frame& frame,
                                        const perception::PatchEncoderBackend& encoder,
                                        int n_grid) {
  require(n_grid >= 1, ErrorCode::invalid_argument, "build_pixel_feature_map: n_grid >= 1");
  require(frame.valid(), ErrorCode::invalid_argument, "build_pixel_feature_map: invalid frame");

  PixelFeatureMap map;
  map.height = frame.height;
  map.width = frame.width;
  map.dim = encoder.feature_dim();
  map.n_grid = n_grid;

  const std::vector<int> row_off = partition_offsets(frame.height, n_grid);
  const std::vector<int> col_off = partition_offsets(frame.width, n_grid);
  map.sub_of_row.resize(frame.height);
  map.sub_of_col.resize(frame.width);
  for (int i = 0; i < n_grid; ++i) {
    for (int r = row_off[i]; r < row_off[i + 1]; ++r) map.sub_of_row[r] = i;
    for (int c = col_off[i]; c < col_off[i + 1]; ++c) map.sub_of_col[c] = i;
  }

  const FloatImage whole = to_float(frame);
  const int native = encoder.native_resolution();
  map.subs.reserve(static_cast<size_t>(n_grid) * n_grid);
  for (int i = 0; i < n_grid; ++i)
    for (int j = 0; j < n_grid; ++j) {
      PixelFeatureMap::SubImage sub;
      sub.r0 = row_off[i];
      sub.c0 = col_off[j];
      sub.h = row_off[i + 1] - row_off[i];
      sub.w = col_off[j + 1] - col_off[j];
      require(sub.h > 0 && sub.w > 0, ErrorCode::invalid_argument,
              "build_pixel_feature_map: n_grid larger than frame");
      const FloatImage cropped = crop(whole, sub.r0, sub.c0, sub.h, sub.w);
      const FloatImage native_img = resize_area(cropped, native, native);
      auto enc = encoder.encode(native_img);
      sub.grid = std::move(enc.patch_features);
      sub.n = enc.grid;
      map.subs.push_back(std::move(sub));
    }
  return map;
}

}  // namespace glue::extract
