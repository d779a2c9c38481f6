#pragma once

#include <string>

#include "glue/core/bitmap.hpp"

namespace glue {

// One-time task-relevant text prompt.
struct TextQuery {
  std::string text;
  std::string object_id;
};

struct BoundingBox {
  int row_min = 0;
  int col_min = 0;
  int row_max = 0;
  int col_max = 0;
  double confidence = 0.0;
};

// Box plus the query identity it answers; segmentation prompts carry this so
// masks can be attributed back to queries.
struct BoxPrompt {
  BoundingBox box;
  std::string object_id;
};

struct Mask {
  Bitmap bitmap;
  std::string object_id;
  // Oracle backends guarantee mask pixels stay inside the prompting box;
  // adapter-backed segmenters may not, and flag it here.
  bool within_prompt_box = true;
};

// First-frame keypoint selected by feature clustering.
struct Keypoint {
  int row = 0;
  int col = 0;
  std::string object_id;
  int cluster_index = 0;
};

// Tracked image-space point; coordinates are continuous, frame_index is
// 1-based (frame 1 = first frame of the episode).
struct KeypointState {
  double row = 0.0;
  double col = 0.0;
  double visibility = 1.0;
  std::string object_id;
  int cluster_index = 0;
  int frame_index = 1;
};

// Cell of the 28x28 observation grid holding a tracked keypoint.
struct KeyPatch {
  int x = 0;
  int y = 0;
  int visible = 1;
  std::string object_id;
  int cluster_index = 0;
};

}  // namespace glue
