#include "glue/pipeline/visualize.hpp"

#include <cstdio>
#include <map>

#include "glue/core/io_util.hpp"
#include "glue/core/png_io.hpp"
#include "glue/encoder/glue_encoder.hpp"
#include "glue/env/episode_record.hpp"
#include "glue/extract/extraction.hpp"
#include "glue/track/session.hpp"

namespace glue::pipeline {

namespace {

struct Rgb {
  uint8_t r, g, b;
};

constexpr Rgb kPalette[] = {{230, 60, 60},  {60, 120, 230}, {60, 190, 90},
                            {230, 170, 40}, {170, 80, 210}, {40, 200, 200}};
constexpr Rgb kGrid{150, 150, 150};

void put(Frame& f, int r, int c, Rgb col) {
  if (!f.in_bounds(r, c)) return;
  uint8_t* p = f.pixel(r, c);
  p[0] = col.r;
  p[1] = col.g;
  p[2] = col.b;
}

void draw_disk(Frame& f, double row, double col, double radius, Rgb color) {
  for (int r = static_cast<int>(row - radius) - 1; r <= static_cast<int>(row + radius) + 1; ++r)
    for (int c = static_cast<int>(col - radius) - 1; c <= static_cast<int>(col + radius) + 1; ++c) {
      const double dr = r + 0.5 - row, dc = c + 0.5 - col;
      if (dr * dr + dc * dc <= radius * radius) put(f, r, c, color);
    }
}

void draw_ring(Frame& f, double row, double col, double radius, Rgb color) {
  for (int r = static_cast<int>(row - radius) - 1; r <= static_cast<int>(row + radius) + 1; ++r)
    for (int c = static_cast<int>(col - radius) - 1; c <= static_cast<int>(col + radius) + 1; ++c) {
      const double d2 = (r + 0.5 - row) * (r + 0.5 - row) + (c + 0.5 - col) * (c + 0.5 - col);
      if (d2 <= radius * radius && d2 >= (radius - 1.5) * (radius - 1.5)) put(f, r, c, color);
    }
}

void draw_cell_outline(Frame& f, const encoder::CellRegion& cell, Rgb color) {
  for (int c = cell.col_begin; c < cell.col_end; ++c) {
    put(f, cell.row_begin, c, color);
    put(f, cell.row_end - 1, c, color);
  }
  for (int r = cell.row_begin; r < cell.row_end; ++r) {
    put(f, r, cell.col_begin, color);
    put(f, r, cell.col_end - 1, color);
  }
}

}  // namespace

int visualize(const std::string& episode_dir, const std::string& track_log_path,
              const std::string& extraction_record_path, const std::string& out_dir) {
  const env::EpisodeRecord record = env::load_episode(episode_dir, true);
  int n_points = 0;
  const auto entries = track::parse_track_log(read_text_file(track_log_path), &n_points);
  require(n_points > 0 && !entries.empty(), ErrorCode::io_error, "visualize: empty track log");

  // ordinal -> palette color, via the extraction record's object order
  std::vector<Rgb> point_color(n_points, kPalette[0]);
  if (!extraction_record_path.empty()) {
    const auto rec = extract::parse_extraction_record(read_text_file(extraction_record_path));
    require(static_cast<int>(rec.keypoints.size()) == n_points, ErrorCode::io_error,
            "visualize: extraction record does not match track log");
    std::map<std::string, size_t> object_index;
    for (const auto& kp : rec.keypoints)
      object_index.emplace(kp.object_id, object_index.size());
    for (int i = 0; i < n_points; ++i)
      point_color[i] =
          kPalette[object_index[rec.keypoints[i].object_id] % std::size(kPalette)];
  }

  std::map<int, std::vector<track::TrackLogEntry>> by_frame;
  for (const auto& e : entries) by_frame[e.frame_index].push_back(e);

  ensure_dir(out_dir);
  int written = 0;
  for (const auto& [frame_index, points] : by_frame) {
    require(frame_index >= 1 && frame_index <= record.length(), ErrorCode::io_error,
            "visualize: track log frame outside episode");
    Frame overlay = record.frames[frame_index - 1];

    // 28x28 grid lines
    for (int k = 1; k < 28; ++k) {
      const auto cell = encoder::key_patch_cell_region(k, k, overlay.height, overlay.width);
      for (int c = 0; c < overlay.width; ++c) put(overlay, cell.row_begin, c, kGrid);
      for (int r = 0; r < overlay.height; ++r) put(overlay, r, cell.col_begin, kGrid);
    }
    for (const auto& p : points) {
      const Rgb color = point_color[p.ordinal % n_points];
      const auto cell =
          encoder::locate_key_patches({KeypointState{p.row, p.col, 1.0, "", 0, frame_index}},
                                      overlay.height, overlay.width)[0];
      draw_cell_outline(overlay,
                        encoder::key_patch_cell_region(cell.x, cell.y, overlay.height,
                                                       overlay.width),
                        color);
      if (p.binary_visibility)
        draw_disk(overlay, p.row, p.col, 3.0, color);
      else
        draw_ring(overlay, p.row, p.col, 4.5, color);
    }
    char name[48];
    std::snprintf(name, sizeof(name), "overlay_%06d.png", frame_index);
    write_png(out_dir + "/" + name, overlay);
    ++written;
  }
  return written;
}

}  // namespace glue::pipeline
