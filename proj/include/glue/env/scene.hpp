#pragma once

#include <array>
#include <string>
#include <vector>

#include "glue/core/bitmap.hpp"
#include "glue/core/image.hpp"
#include "glue/types.hpp"

namespace glue::env {

enum class Task { push_button, stack_block, place_object, fold_proxy };

Task task_from_name(const std::string& name);
std::string task_name(Task task);

enum class ShapeKind { rectangle, disk, triangle };

struct Color {
  uint8_t r = 0, g = 0, b = 0;
};

struct ObjectSpec {
  std::string id;
  std::string label;  // matched against query text by the oracle detector
  ShapeKind shape = ShapeKind::rectangle;
  Color color;
  double row = 0, col = 0;      // center, pixel units
  double half_h = 0, half_w = 0;  // disk: half_h is the radius
  bool task_relevant = false;
  bool graspable = false;
};

struct OccluderSpec {
  ShapeKind shape = ShapeKind::rectangle;
  Color color;
  double row = 0, col = 0;
  double half_h = 0, half_w = 0;
};

struct AgentState {
  double row = 0, col = 0;
  bool closed = false;
  int attached = -1;  // index into Scene::objects, -1 when empty-handed
};

struct IlluminationSpec {
  bool enabled = false;
  std::array<double, 3> base = {1.0, 1.0, 1.0};
  std::array<double, 3> amp = {0.0, 0.0, 0.0};
  std::array<double, 3> phase = {0.0, 0.0, 0.0};
  double period = 30.0;

  // Per-channel gain at a 1-based frame index, clamped to [0.3, 1.7].
  std::array<double, 3> gains(int frame_index) const;
};

struct Scene {
  Task task = Task::push_button;
  int frame_size = 512;
  std::vector<ObjectSpec> objects;  // draw order; task-irrelevant clutter first
  AgentState agent;
  Color background{202, 178, 152};
  std::vector<OccluderSpec> occluders;  // drawn last (foreground)
  IlluminationSpec illumination;
  double goal_row = 0, goal_col = 0;  // fold_proxy target
  uint64_t seed = 0;

  int find_object(const std::string& id) const;
  std::vector<int> task_object_indices() const;
};

// Per-object rasterization record for one frame. visible = amodal minus
// occlusion; bbox covers visible pixels.
struct ObjectGroundTruth {
  std::string object_id;
  RleBitmap amodal;
  RleBitmap occlusion;
  size_t amodal_count = 0;
  size_t visible_count = 0;
  int bbox_row_min = 0, bbox_col_min = 0, bbox_row_max = 0, bbox_col_max = 0;
  double motion_dr = 0, motion_dc = 0;  // rigid motion since previous frame
};

struct FrameGroundTruth {
  int frame_index = 1;  // 1-based
  std::vector<ObjectGroundTruth> objects;

  const ObjectGroundTruth* find(const std::string& object_id) const;
};

// Deterministic software rasterization. Draw order: background, objects in
// list order, agent, occluders; illumination gain is applied last.
Frame render_scene(const Scene& scene, int frame_index);

// Exact rasterization bookkeeping for the same frame (motions left zero).
FrameGroundTruth rasterize_ground_truth(const Scene& scene, int frame_index);

Bitmap rasterize_object(const ObjectSpec& obj, int frame_size);

std::vector<TextQuery> task_queries(Task task);

}  // namespace glue::env
