#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glue/core/error.hpp"

namespace glue {

// Dense boolean grid (one byte per pixel).
struct Bitmap {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> data;

  Bitmap() = default;
  Bitmap(int h, int w) : height(h), width(w), data(static_cast<size_t>(h) * w, 0) {}

  uint8_t at(int r, int c) const { return data[static_cast<size_t>(r) * width + c]; }
  void set(int r, int c, bool v) { data[static_cast<size_t>(r) * width + c] = v ? 1 : 0; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }

  size_t count() const {
    size_t n = 0;
    for (uint8_t v : data) n += v;
    return n;
  }
};

// Run-length encoding over the row-major flattening, alternating run lengths
// starting with a (possibly zero) run of 0s.
struct RleBitmap {
  int height = 0;
  int width = 0;
  std::vector<uint32_t> runs;

  static RleBitmap encode(const Bitmap& bm);
  Bitmap decode() const;

  // Point query without decoding (linear scan with early exit via prefix sums).
  bool at(int r, int c) const;

  size_t count_set() const;

  // Text form: "H W n run0 run1 ...".
  std::string to_text() const;
  static RleBitmap from_text(const std::string& text);
};

}  // namespace glue
