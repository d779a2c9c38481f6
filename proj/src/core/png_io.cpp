#include "glue/core/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace glue {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void put_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& data) {
  put_u32(out, static_cast<uint32_t>(data.size()));
  const size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, crc);
}

std::vector<uint8_t> zlib_deflate(const std::vector<uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> out(bound);
  int rc = compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6);
  require(rc == Z_OK, ErrorCode::io_error, "png: deflate failed");
  out.resize(bound);
  return out;
}

std::vector<uint8_t> zlib_inflate(const uint8_t* data, size_t size, size_t expected) {
  std::vector<uint8_t> out(expected);
  uLongf got = static_cast<uLongf>(expected);
  int rc = uncompress(out.data(), &got, data, static_cast<uLong>(size));
  require(rc == Z_OK && got == expected, ErrorCode::io_error, "png: inflate failed");
  return out;
}

uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<uint8_t>(a);
  if (pb <= pc) return static_cast<uint8_t>(b);
  return static_cast<uint8_t>(c);
}

}  // namespace

std::vector<uint8_t> encode_png(const Frame& frame) {
  require(frame.valid(), ErrorCode::invalid_argument, "encode_png: invalid frame");
  const int h = frame.height, w = frame.width;
  const size_t stride = static_cast<size_t>(w) * 3;

  std::vector<uint8_t> raw;
  raw.reserve((stride + 1) * h);
  for (int r = 0; r < h; ++r) {
    raw.push_back(0);  // filter: none
    const uint8_t* row = frame.pixel(r, 0);
    raw.insert(raw.end(), row, row + stride);
  }

  std::vector<uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<uint8_t> ihdr;
  put_u32(ihdr, static_cast<uint32_t>(w));
  put_u32(ihdr, static_cast<uint32_t>(h));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", zlib_deflate(raw));
  put_chunk(out, "IEND", {});
  return out;
}

Frame decode_png(const std::vector<uint8_t>& bytes) {
  require(bytes.size() > 8 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G',
          ErrorCode::io_error, "decode_png: not a png");
  size_t pos = 8;
  int w = 0, h = 0, bit_depth = 0, color_type = 0;
  std::vector<uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    const uint32_t len = get_u32(bytes.data() + pos);
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    require(pos + 12 + len <= bytes.size(), ErrorCode::io_error, "decode_png: truncated chunk");
    const uint8_t* data = bytes.data() + pos + 8;
    if (std::memcmp(type, "IHDR", 4) == 0) {
      w = static_cast<int>(get_u32(data));
      h = static_cast<int>(get_u32(data + 4));
      bit_depth = data[8];
      color_type = data[9];
      require(data[12] == 0, ErrorCode::io_error, "decode_png: interlace unsupported");
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  require(w > 0 && h > 0, ErrorCode::io_error, "decode_png: missing IHDR");
  require(bit_depth == 8 && color_type == 2, ErrorCode::io_error,
          "decode_png: only 8-bit RGB supported");

  const size_t stride = static_cast<size_t>(w) * 3;
  std::vector<uint8_t> raw = zlib_inflate(idat.data(), idat.size(), (stride + 1) * h);

  Frame frame(h, w);
  std::vector<uint8_t> prev(stride, 0);
  for (int r = 0; r < h; ++r) {
    const uint8_t filter = raw[(stride + 1) * r];
    const uint8_t* src = raw.data() + (stride + 1) * r + 1;
    uint8_t* dst = frame.pixel(r, 0);
    for (size_t i = 0; i < stride; ++i) {
      const int a = i >= 3 ? dst[i - 3] : 0;
      const int b = prev[i];
      const int c = i >= 3 ? prev[i - 3] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: raise(ErrorCode::io_error, "decode_png: bad filter");
      }
      dst[i] = static_cast<uint8_t>(v);
    }
    std::memcpy(prev.data(), dst, stride);
  }
  return frame;
}

void write_png(const std::string& path, const Frame& frame) {
  const std::vector<uint8_t> bytes = encode_png(frame);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_error, "write_png: cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(out.good(), ErrorCode::io_error, "write_png: write failed " + path);
}

Frame read_png(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_error, "read_png: cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace glue
