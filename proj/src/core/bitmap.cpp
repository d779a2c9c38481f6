#include "glue/core/bitmap.hpp"

#include <sstream>

namespace glue {

RleBitmap RleBitmap::encode(const Bitmap& bm) {
  RleBitmap out;
  out.height = bm.height;
  out.width = bm.width;
  const size_t n = bm.data.size();
  uint8_t cur = 0;
  uint32_t run = 0;
  for (size_t i = 0; i < n; ++i) {
    if (bm.data[i] == cur) {
      ++run;
    } else {
      out.runs.push_back(run);
      cur = bm.data[i];
      run = 1;
    }
  }
  out.runs.push_back(run);
  return out;
}

Bitmap RleBitmap::decode() const {
  Bitmap out(height, width);
  size_t pos = 0;
  uint8_t cur = 0;
  for (uint32_t run : runs) {
    if (cur) std::fill(out.data.begin() + pos, out.data.begin() + pos + run, uint8_t(1));
    pos += run;
    cur ^= 1;
  }
  require(pos == out.data.size(), ErrorCode::io_error, "rle: size mismatch");
  return out;
}

bool RleBitmap::at(int r, int c) const {
  if (r < 0 || r >= height || c < 0 || c >= width) return false;
  const uint64_t idx = static_cast<uint64_t>(r) * width + c;
  uint64_t pos = 0;
  uint8_t cur = 0;
  for (uint32_t run : runs) {
    pos += run;
    if (idx < pos) return cur != 0;
    cur ^= 1;
  }
  return false;
}

size_t RleBitmap::count_set() const {
  size_t n = 0;
  uint8_t cur = 0;
  for (uint32_t run : runs) {
    if (cur) n += run;
    cur ^= 1;
  }
  return n;
}

std::string RleBitmap::to_text() const {
  std::ostringstream out;
  out << height << ' ' << width << ' ' << runs.size();
  for (uint32_t run : runs) out << ' ' << run;
  return out.str();
}

RleBitmap RleBitmap::from_text(const std::string& text) {
  std::istringstream in(text);
  RleBitmap out;
  size_t n = 0;
  in >> out.height >> out.width >> n;
  require(in.good() || in.eof(), ErrorCode::io_error, "rle: bad text header");
  out.runs.resize(n);
  uint64_t total = 0;
  for (size_t i = 0; i < n; ++i) {
    in >> out.runs[i];
    total += out.runs[i];
  }
  require(!in.fail(), ErrorCode::io_error, "rle: bad text runs");
  require(total == static_cast<uint64_t>(out.height) * out.width, ErrorCode::io_error,
          "rle: runs do not cover bitmap");
  return out;
}

}  // namespace glue
