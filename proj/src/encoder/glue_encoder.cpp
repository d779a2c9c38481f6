#include "glue/encoder/glue_encoder.hpp"

#include <cmath>

namespace glue::encoder {

std::vector<KeyPatch> locate_key_patches(const std::vector<KeypointState>& states,
                                         int frame_height, int frame_width) {
  require(frame_height > 0 && frame_width > 0, ErrorCode::invalid_argument,
          "locate_key_patches: bad frame size");
  std::vector<KeyPatch> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    require(s.visibility == 0.0 || s.visibility == 1.0, ErrorCode::invalid_argument,
            "locate_key_patches: states must carry binary visibility");
    KeyPatch p;
    p.x = std::clamp(static_cast<int>(std::floor(s.row * 28.0 / frame_height)), 0, 27);
    p.y = std::clamp(static_cast<int>(std::floor(s.col * 28.0 / frame_width)), 0, 27);
    p.visible = s.visibility >= 0.5 ? 1 : 0;
    p.object_id = s.object_id;
    p.cluster_index = s.cluster_index;
    out.push_back(p);
  }
  return out;
}

CellRegion key_patch_cell_region(int x, int y, int frame_height, int frame_width) {
  require(x >= 0 && x < 28 && y >= 0 && y < 28, ErrorCode::invalid_argument,
          "key_patch_cell_region: cell outside grid");
  auto span = [](int cell, int extent) {
    // pixels r with floor(r*28/extent) == cell
    const int begin = (cell * extent + 27) / 28;       // ceil(cell*extent/28)
    const int end = ((cell + 1) * extent + 27) / 28;   // ceil((cell+1)*extent/28)
    return std::pair<int, int>(begin, std::min(end, extent));
  };
  CellRegion region;
  std::tie(region.row_begin, region.row_end) = span(x, frame_height);
  std::tie(region.col_begin, region.col_end) = span(y, frame_width);
  return region;
}

}  // namespace glue::encoder
