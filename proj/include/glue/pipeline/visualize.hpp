#pragma once

#include <string>

namespace glue::pipeline {

// Overlay emitter: episode frames with keypoint markers (color by object,
// hollow at the last clamped position when invisible), the 28x28 grid, and
// highlighted key-patch cells. extraction_record_path supplies the
// keypoint-to-object mapping (may be empty: single palette color). Returns
// the number of overlay frames written. Output bytes are deterministic.
int visualize(const std::string& episode_dir, const std::string& track_log_path,
              const std::string& extraction_record_path, const std::string& out_dir);

}  // namespace glue::pipeline
