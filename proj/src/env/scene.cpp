#include "glue/env/scene.hpp"

#include <algorithm>
#include <cmath>

namespace glue::env {

Task task_from_name(const std::string& name) {
  if (name == "push-button") return Task::push_button;
  if (name == "stack-block") return Task::stack_block;
  if (name == "place-object") return Task::place_object;
  if (name == "fold-proxy") return Task::fold_proxy;
  raise(ErrorCode::invalid_task, "unknown task '" + name + "'");
}

std::string task_name(Task task) {
  switch (task) {
    case Task::push_button: return "push-button";
    case Task::stack_block: return "stack-block";
    case Task::place_object: return "place-object";
    case Task::fold_proxy: return "fold-proxy";
  }
  return "?";
}

std::array<double, 3> IlluminationSpec::gains(int frame_index) const {
  std::array<double, 3> g = {1.0, 1.0, 1.0};
  if (!enabled) return g;
  for (int c = 0; c < 3; ++c) {
    const double v = base[c] + amp[c] * std::sin(6.283185307179586 * frame_index / period + phase[c]);
    g[c] = std::clamp(v, 0.3, 1.7);
  }
  return g;
}

int Scene::find_object(const std::string& id) const {
  for (size_t i = 0; i < objects.size(); ++i)
    if (objects[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<int> Scene::task_object_indices() const {
  std::vector<int> out;
  for (size_t i = 0; i < objects.size(); ++i)
    if (objects[i].task_relevant) out.push_back(static_cast<int>(i));
  return out;
}

const ObjectGroundTruth* FrameGroundTruth::find(const std::string& object_id) const {
  for (const auto& o : objects)
    if (o.object_id == object_id) return &o;
  return nullptr;
}

namespace {

struct ShapeGeom {
  ShapeKind shape;
  double row, col, half_h, half_w;
};

inline bool inside_shape(const ShapeGeom& g, double pr, double pc) {
  const double dr = pr - g.row;
  const double dc = pc - g.col;
  switch (g.shape) {
    case ShapeKind::rectangle:
      return std::abs(dr) <= g.half_h && std::abs(dc) <= g.half_w;
    case ShapeKind::disk:
      return dr * dr + dc * dc <= g.half_h * g.half_h;
    case ShapeKind::triangle: {
      // upward isoceles: apex (row-half_h, col), base corners (row+half_h, col +- half_w)
      if (dr < -g.half_h || dr > g.half_h) return false;
      const double t = (dr + g.half_h) / (2.0 * g.half_h);  // 0 at apex, 1 at base
      return std::abs(dc) <= t * g.half_w;
    }
  }
  return false;
}

// Iterates pixels in the shape's clipped bounding box, calling fn(r,c) for
// pixels whose center lies inside the shape.
template <typename Fn>
void for_shape_pixels(const ShapeGeom& g, int frame_size, Fn&& fn) {
  const double reach_h = g.half_h;
  const double reach_w = (g.shape == ShapeKind::disk) ? g.half_h : g.half_w;
  const int r0 = std::max(0, static_cast<int>(std::floor(g.row - reach_h - 1)));
  const int r1 = std::min(frame_size - 1, static_cast<int>(std::ceil(g.row + reach_h + 1)));
  const int c0 = std::max(0, static_cast<int>(std::floor(g.col - reach_w - 1)));
  const int c1 = std::min(frame_size - 1, static_cast<int>(std::ceil(g.col + reach_w + 1)));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c)
      if (inside_shape(g, r + 0.5, c + 0.5)) fn(r, c);
}

constexpr double kAgentOuterR = 14.0;
constexpr double kAgentInnerR = 9.0;
constexpr double kAgentDotR = 5.0;
const Color kAgentColor{58, 58, 70};

template <typename Fn>
void for_agent_pixels(const AgentState& agent, int frame_size, Fn&& fn) {
  const ShapeGeom outer{ShapeKind::disk, agent.row, agent.col, kAgentOuterR, kAgentOuterR};
  for_shape_pixels(outer, frame_size, [&](int r, int c) {
    const double dr = r + 0.5 - agent.row;
    const double dc = c + 0.5 - agent.col;
    const double d2 = dr * dr + dc * dc;
    const bool ring = d2 > kAgentInnerR * kAgentInnerR;
    const bool dot = agent.closed && d2 <= kAgentDotR * kAgentDotR;
    if (ring || dot) fn(r, c);
  });
}

ShapeGeom geom_of(const ObjectSpec& o) { return {o.shape, o.row, o.col, o.half_h, o.half_w}; }
ShapeGeom geom_of(const OccluderSpec& o) { return {o.shape, o.row, o.col, o.half_h, o.half_w}; }

}  // namespace

Bitmap rasterize_object(const ObjectSpec& obj, int frame_size) {
  Bitmap bm(frame_size, frame_size);
  for_shape_pixels(geom_of(obj), frame_size, [&](int r, int c) { bm.set(r, c, true); });
  return bm;
}

Frame render_scene(const Scene& scene, int frame_index) {
  const int n = scene.frame_size;
  Frame frame(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      uint8_t* p = frame.pixel(r, c);
      p[0] = scene.background.r;
      p[1] = scene.background.g;
      p[2] = scene.background.b;
    }
  auto paint = [&](int r, int c, Color col) {
    uint8_t* p = frame.pixel(r, c);
    p[0] = col.r;
    p[1] = col.g;
    p[2] = col.b;
  };
  for (const auto& obj : scene.objects)
    for_shape_pixels(geom_of(obj), n, [&](int r, int c) { paint(r, c, obj.color); });
  for_agent_pixels(scene.agent, n, [&](int r, int c) { paint(r, c, kAgentColor); });
  for (const auto& occ : scene.occluders)
    for_shape_pixels(geom_of(occ), n, [&](int r, int c) { paint(r, c, occ.color); });

  const auto gains = scene.illumination.gains(frame_index);
  if (scene.illumination.enabled) {
    for (size_t i = 0; i < frame.rgb.size(); i += 3)
      for (int c = 0; c < 3; ++c) {
        const double v = std::round(frame.rgb[i + c] * gains[c]);
        frame.rgb[i + c] = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
      }
  }
  return frame;
}

FrameGroundTruth rasterize_ground_truth(const Scene& scene, int frame_index) {
  const int n = scene.frame_size;
  FrameGroundTruth out;
  out.frame_index = frame_index;

  // cover = union of everything drawn after the object under consideration
  Bitmap cover(n, n);
  for (const auto& occ : scene.occluders)
    for_shape_pixels(geom_of(occ), n, [&](int r, int c) { cover.set(r, c, true); });
  for_agent_pixels(scene.agent, n, [&](int r, int c) { cover.set(r, c, true); });

  // Ground truth is emitted for task-relevant objects only; clutter objects
  // are drawn before them and can never cover them.
  std::vector<ObjectGroundTruth> gts(scene.objects.size());
  for (int i = static_cast<int>(scene.objects.size()) - 1; i >= 0; --i) {
    const ObjectSpec& obj = scene.objects[i];
    const ShapeGeom geom = geom_of(obj);
    if (obj.task_relevant) {
      ObjectGroundTruth gt;
      gt.object_id = obj.id;
      Bitmap fp(n, n), occl(n, n);
      int rmin = n, cmin = n, rmax = -1, cmax = -1;
      for_shape_pixels(geom, n, [&](int r, int c) {
        fp.set(r, c, true);
        ++gt.amodal_count;
        if (cover.at(r, c)) {
          occl.set(r, c, true);
        } else {
          ++gt.visible_count;
          rmin = std::min(rmin, r);
          cmin = std::min(cmin, c);
          rmax = std::max(rmax, r);
          cmax = std::max(cmax, c);
        }
      });
      gt.amodal = RleBitmap::encode(fp);
      gt.occlusion = RleBitmap::encode(occl);
      if (gt.visible_count > 0) {
        gt.bbox_row_min = rmin;
        gt.bbox_col_min = cmin;
        gt.bbox_row_max = rmax;
        gt.bbox_col_max = cmax;
      }
      gts[i] = std::move(gt);
    }
    for_shape_pixels(geom, n, [&](int r, int c) { cover.set(r, c, true); });
  }
  for (size_t i = 0; i < scene.objects.size(); ++i)
    if (scene.objects[i].task_relevant) out.objects.push_back(std::move(gts[i]));
  return out;
}

std::vector<TextQuery> task_queries(Task task) {
  switch (task) {
    case Task::push_button: return {{"red button", "button"}};
    case Task::stack_block: return {{"white block", "white-block"}, {"blue block", "blue-block"}};
    case Task::place_object: return {{"orange fruit", "fruit"}, {"gray plate", "plate"}};
    case Task::fold_proxy: return {{"purple towel", "towel"}};
  }
  return {};
}

}  // namespace glue::env
