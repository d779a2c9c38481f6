#pragma once

#include <string>
#include <vector>

#include "glue/core/image.hpp"

namespace glue {

// Minimal 8-bit RGB PNG writer/reader (zlib-backed). Output bytes are
// deterministic for a given frame: fixed chunk layout, filter 0 rows,
// fixed deflate level.
std::vector<uint8_t> encode_png(const Frame& frame);
Frame decode_png(const std::vector<uint8_t>& bytes);

void write_png(const std::string& path, const Frame& frame);
Frame read_png(const std::string& path);

}  // namespace glue
