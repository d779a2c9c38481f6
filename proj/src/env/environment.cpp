#include "glue/env/environment.hpp"

#include <algorithm>
#include <cmath>

#include "glue/core/rng.hpp"

namespace glue::env {

namespace {

constexpr double kMargin = 60.0;       // placement region inset
constexpr double kGripperClear = 90.0;  // min gripper distance from objects at reset
constexpr double kPressRadius = 12.0;
constexpr double kStackOffsetRow = -10.0;
constexpr double kStackRadius = 10.0;
constexpr double kPlaceRadius = 12.0;
constexpr double kFoldRadius = 10.0;

double dist(double r0, double c0, double r1, double c1) {
  return std::hypot(r0 - r1, c0 - c1);
}

struct Placer {
  Rng rng;
  double lo, hi;
  explicit Placer(uint64_t seed, int frame_size)
      : rng(seed), lo(kMargin), hi(frame_size - kMargin) {}

  std::pair<double, double> draw() {
    const double r = std::floor(rng.uniform(lo, hi));
    const double c = std::floor(rng.uniform(lo, hi));
    return {r, c};
  }

  std::pair<double, double> draw_sep(const std::vector<std::pair<double, double>>& others,
                                     double min_sep) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto [r, c] = draw();
      bool ok = true;
      for (const auto& [orr, oc] : others)
        if (dist(r, c, orr, oc) < min_sep) ok = false;
      if (ok) return {r, c};
    }
    raise(ErrorCode::placement_failure, "could not place object after 100 attempts");
  }
};

}  // namespace

PerturbKind perturb_from_name(const std::string& name) {
  if (name == "none" || name == "in-domain") return PerturbKind::none;
  if (name == "clutter") return PerturbKind::clutter;
  if (name == "occlusion") return PerturbKind::occlusion;
  if (name == "illumination") return PerturbKind::illumination;
  raise(ErrorCode::invalid_argument, "unknown perturbation '" + name + "'");
}

std::string perturb_name(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::none: return "none";
    case PerturbKind::clutter: return "clutter";
    case PerturbKind::occlusion: return "occlusion";
    case PerturbKind::illumination: return "illumination";
  }
  return "?";
}

Scene make_scene(Task task, uint64_t seed) {
  Scene scene;
  scene.task = task;
  scene.seed = seed;
  Placer placer(derive_seed(seed, "env.place"), scene.frame_size);

  std::vector<std::pair<double, double>> taken;
  auto add_object = [&](const std::string& id, const std::string& label, ShapeKind shape,
                        Color color, double half_h, double half_w, bool graspable,
                        double min_sep) {
    auto [r, c] = placer.draw_sep(taken, min_sep);
    taken.push_back({r, c});
    ObjectSpec obj;
    obj.id = id;
    obj.label = label;
    obj.shape = shape;
    obj.color = color;
    obj.row = r;
    obj.col = c;
    obj.half_h = half_h;
    obj.half_w = half_w;
    obj.task_relevant = true;
    obj.graspable = graspable;
    scene.objects.push_back(obj);
  };

  switch (task) {
    case Task::push_button: {
      const double radius = std::floor(placer.rng.uniform(17.0, 23.0));
      add_object("button", "red button", ShapeKind::disk, Color{204, 31, 38}, radius, radius,
                 false, 0.0);
      break;
    }
    case Task::stack_block:
      // blue first so the carried white block draws on top once stacked
      add_object("blue-block", "blue block", ShapeKind::rectangle, Color{40, 80, 200}, 24, 24,
                 false, 0.0);
      add_object("white-block", "white block", ShapeKind::rectangle, Color{240, 240, 240}, 20, 20,
                 true, 130.0);
      break;
    case Task::place_object:
      add_object("plate", "gray plate", ShapeKind::disk, Color{188, 193, 205}, 44, 44, false, 0.0);
      add_object("fruit", "orange fruit", ShapeKind::disk, Color{240, 140, 30}, 14, 14, true,
                 150.0);
      break;
    case Task::fold_proxy: {
      add_object("towel", "purple towel", ShapeKind::rectangle, Color{168, 140, 210}, 40, 40, true,
                 0.0);
      const ObjectSpec& towel = scene.objects.back();
      const double dr = towel.row < scene.frame_size / 2.0 ? 110.0 : -110.0;
      const double dc = towel.col < scene.frame_size / 2.0 ? 110.0 : -110.0;
      scene.goal_row = towel.row + dr;
      scene.goal_col = towel.col + dc;
      break;
    }
  }

  auto [gr, gc] = placer.draw_sep(taken, kGripperClear);
  scene.agent.row = gr;
  scene.agent.col = gc;
  scene.agent.closed = false;
  scene.agent.attached = -1;
  return scene;
}

Scene apply_perturbation(const Scene& scene, PerturbKind kind, uint64_t seed) {
  Scene out = scene;
  Rng rng(derive_seed(seed, "env.perturb"));
  switch (kind) {
    case PerturbKind::none:
      break;
    case PerturbKind::clutter: {
      // 5-15 distractors, kept one grid cell clear of every task object so
      // clutter never enters a task object's mask or its key-patch cells.
      const int count = static_cast<int>(rng.uniform_int(5, 15));
      const double clear_margin = 20.0;
      static const Color palette[] = {{96, 170, 96},  {90, 160, 200}, {210, 180, 80},
                                      {190, 100, 170}, {120, 200, 180}, {160, 120, 80}};
      static const ShapeKind shapes[] = {ShapeKind::rectangle, ShapeKind::disk,
                                         ShapeKind::triangle};
      std::vector<ObjectSpec> distractors;
      for (int i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
          ObjectSpec d;
          d.id = "distractor-" + std::to_string(i);
          d.label = "distractor " + std::to_string(i);
          d.shape = shapes[rng.uniform_int(0, 2)];
          d.color = palette[rng.uniform_int(0, 5)];
          d.half_h = std::floor(rng.uniform(10.0, 26.0));
          d.half_w = d.shape == ShapeKind::disk ? d.half_h : std::floor(rng.uniform(10.0, 26.0));
          d.row = std::floor(rng.uniform(24.0, scene.frame_size - 24.0));
          d.col = std::floor(rng.uniform(24.0, scene.frame_size - 24.0));
          d.task_relevant = false;
          d.graspable = false;
          bool ok = true;
          const double reach = std::max(d.half_h, d.half_w);
          for (const auto& obj : scene.objects) {
            const double obj_reach = std::max(obj.half_h, obj.half_w);
            if (dist(d.row, d.col, obj.row, obj.col) < reach + obj_reach + clear_margin) ok = false;
          }
          for (const auto& other : distractors) {
            const double other_reach = std::max(other.half_h, other.half_w);
            if (dist(d.row, d.col, other.row, other.col) < reach + other_reach + 4.0) ok = false;
          }
          if (ok) {
            distractors.push_back(d);
            placed = true;
          }
        }
        if (!placed) raise(ErrorCode::placement_failure, "clutter placement failed");
      }
      // drawn before task objects
      out.objects.insert(out.objects.begin(), distractors.begin(), distractors.end());
      break;
    }
    case PerturbKind::occlusion: {
      const auto task_idx = scene.task_object_indices();
      require(!task_idx.empty(), ErrorCode::invalid_argument, "occlusion: no task objects");
      const int target = task_idx[rng.uniform_int(0, static_cast<int>(task_idx.size()) - 1)];
      const ObjectSpec& obj = scene.objects[target];
      const size_t total = rasterize_object(obj, scene.frame_size).count();
      for (int attempt = 0; attempt < 100; ++attempt) {
        OccluderSpec occ;
        occ.shape = rng.uniform() < 0.5 ? ShapeKind::rectangle : ShapeKind::disk;
        occ.color = Color{82, 54, 42};
        const double scale = rng.uniform(1.0, 1.6);
        occ.half_h = std::floor(obj.half_h * scale + 8.0);
        occ.half_w = occ.shape == ShapeKind::disk ? occ.half_h
                                                  : std::floor(obj.half_w * scale + 8.0);
        const double angle = rng.uniform(0.0, 6.283185307179586);
        const double offset = rng.uniform(0.8, 1.6) * std::max(obj.half_h, obj.half_w);
        occ.row = obj.row + offset * std::sin(angle);
        occ.col = obj.col + offset * std::cos(angle);

        Scene candidate = scene;
        candidate.occluders.push_back(occ);
        const FrameGroundTruth gt = rasterize_ground_truth(candidate, 1);
        const ObjectGroundTruth* ogt = gt.find(obj.id);
        const double frac =
            total == 0 ? 0.0 : static_cast<double>(ogt->amodal_count - ogt->visible_count) / total;
        if (frac >= 0.30 && frac <= 0.70) {
          out.occluders.push_back(occ);
          return out;
        }
      }
      raise(ErrorCode::placement_failure, "occluder placement failed to reach 30-70% coverage");
    }
    case PerturbKind::illumination: {
      out.illumination.enabled = true;
      for (int c = 0; c < 3; ++c) {
        out.illumination.base[c] = 1.0;
        out.illumination.amp[c] = rng.uniform(0.25, 0.55);
        out.illumination.phase[c] = rng.uniform(0.0, 6.283185307179586);
      }
      out.illumination.period = std::floor(rng.uniform(18.0, 40.0));
      break;
    }
  }
  return out;
}

Frame Environment::reset(Task task, uint64_t seed) { return begin(make_scene(task, seed)); }

Frame Environment::begin(const Scene& scene) {
  scene_ = scene;
  frame_count_ = 0;
  steps_ = 0;
  done_ = false;
  gt_.clear();
  return render_and_record();
}

Frame Environment::render_and_record() {
  ++frame_count_;
  Frame frame = render_scene(scene_, frame_count_);
  gt_.push_back(rasterize_ground_truth(scene_, frame_count_));
  return frame;
}

std::vector<std::pair<double, double>> apply_action(Scene& scene,
                                                    const std::array<double, 3>& action,
                                                    const Environment::Params& params) {
  std::array<double, 3> a = action;
  for (double& v : a) v = std::clamp(v, -1.0, 1.0);

  const double size = scene.frame_size;
  const double new_r = std::clamp(scene.agent.row + a[0] * params.max_step_px, 0.0, size - 1.0);
  const double new_c = std::clamp(scene.agent.col + a[1] * params.max_step_px, 0.0, size - 1.0);
  const double dr = new_r - scene.agent.row;
  const double dc = new_c - scene.agent.col;
  scene.agent.row = new_r;
  scene.agent.col = new_c;

  std::vector<std::pair<double, double>> motion(scene.objects.size(), {0.0, 0.0});
  if (scene.agent.attached >= 0) {
    ObjectSpec& obj = scene.objects[scene.agent.attached];
    obj.row += dr;
    obj.col += dc;
    motion[scene.agent.attached] = {dr, dc};
  }

  if (a[2] >= 0.5 && !scene.agent.closed) {
    scene.agent.closed = true;
    int best = -1;
    double best_d = params.attach_radius;
    for (size_t i = 0; i < scene.objects.size(); ++i) {
      const ObjectSpec& obj = scene.objects[i];
      if (!obj.graspable) continue;
      const double d = dist(scene.agent.row, scene.agent.col, obj.row, obj.col);
      if (d <= best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    scene.agent.attached = best;
  } else if (a[2] <= -0.5 && scene.agent.closed) {
    scene.agent.closed = false;
    scene.agent.attached = -1;
  }
  return motion;
}

StepResult Environment::step(const std::array<double, 3>& action) {
  require(frame_count_ > 0, ErrorCode::invalid_argument, "step before reset");
  const std::vector<std::pair<double, double>> motion = apply_action(scene_, action, params_);
  ++steps_;
  StepResult result;
  result.frame = render_and_record();
  // record rigid motions into the new frame's ground truth
  FrameGroundTruth& gt = gt_.back();
  for (auto& ogt : gt.objects) {
    const int idx = scene_.find_object(ogt.object_id);
    if (idx >= 0) {
      ogt.motion_dr = motion[idx].first;
      ogt.motion_dc = motion[idx].second;
    }
  }
  result.success = task_success(scene_);
  done_ = result.success || steps_ >= params_.max_steps;
  result.done = done_;
  return result;
}

bool Environment::success() const { return task_success(scene_); }

const FrameGroundTruth& Environment::ground_truth(int frame_index) const {
  require(frame_index >= 1 && frame_index <= static_cast<int>(gt_.size()),
          ErrorCode::invalid_argument, "ground_truth: bad frame index");
  return gt_[frame_index - 1];
}

std::array<float, 7> Environment::state7() const {
  const double half = scene_.frame_size / 2.0;
  return {static_cast<float>(scene_.agent.row / half - 1.0),
          static_cast<float>(scene_.agent.col / half - 1.0),
          scene_.agent.closed ? 1.0f : -1.0f,
          0.f, 0.f, 0.f, 0.f};
}

std::array<double, 3> Environment::expert_action() const {
  return scripted_expert(scene_, params_);
}

namespace {

std::array<double, 3> move_toward(const Scene& scene, double tr, double tc, double max_step,
                                  double grip) {
  const double kp = 0.5;
  const double dr = std::clamp(kp * (tr - scene.agent.row), -max_step, max_step);
  const double dc = std::clamp(kp * (tc - scene.agent.col), -max_step, max_step);
  return {dr / max_step, dc / max_step, grip};
}

}  // namespace

bool task_success(const Scene& scene) {
  switch (scene.task) {
    case Task::push_button: {
      const int b = scene.find_object("button");
      return b >= 0 && scene.agent.closed &&
             dist(scene.agent.row, scene.agent.col, scene.objects[b].row, scene.objects[b].col) <=
                 kPressRadius;
    }
    case Task::stack_block: {
      const int w = scene.find_object("white-block");
      const int b = scene.find_object("blue-block");
      if (w < 0 || b < 0 || scene.agent.attached == w) return false;
      return dist(scene.objects[w].row, scene.objects[w].col,
                  scene.objects[b].row + kStackOffsetRow, scene.objects[b].col) <= kStackRadius;
    }
    case Task::place_object: {
      const int f = scene.find_object("fruit");
      const int p = scene.find_object("plate");
      if (f < 0 || p < 0 || scene.agent.attached == f) return false;
      return dist(scene.objects[f].row, scene.objects[f].col, scene.objects[p].row,
                  scene.objects[p].col) <= kPlaceRadius;
    }
    case Task::fold_proxy: {
      const int t = scene.find_object("towel");
      if (t < 0 || scene.agent.attached == t) return false;
      return dist(scene.objects[t].row, scene.objects[t].col, scene.goal_row, scene.goal_col) <=
             kFoldRadius;
    }
  }
  return false;
}

std::array<double, 3> scripted_expert(const Scene& scene, const Environment::Params& params) {
  const double max_step = params.max_step_px;
  auto grasp_carry_release = [&](const std::string& carry_id, double goal_r, double goal_c,
                                 double release_radius) -> std::array<double, 3> {
    const int idx = scene.find_object(carry_id);
    require(idx >= 0, ErrorCode::invalid_task, "expert: missing object " + carry_id);
    const ObjectSpec& obj = scene.objects[idx];
    if (task_success(scene)) return {0.0, 0.0, 0.0};
    if (scene.agent.attached != idx) {
      const double d = dist(scene.agent.row, scene.agent.col, obj.row, obj.col);
      if (d <= params.attach_radius * 0.6) return {0.0, 0.0, 1.0};
      // approach with the gripper open so a close can latch cleanly
      return move_toward(scene, obj.row, obj.col, max_step, scene.agent.closed ? -1.0 : 0.0);
    }
    // steer so the carried object (not the gripper) reaches the goal;
    // attachment preserves the grip offset
    const double d_obj = dist(obj.row, obj.col, goal_r, goal_c);
    if (d_obj <= release_radius * 0.5) return {0.0, 0.0, -1.0};
    return move_toward(scene, goal_r + (scene.agent.row - obj.row),
                       goal_c + (scene.agent.col - obj.col), max_step, 0.0);
  };

  switch (scene.task) {
    case Task::push_button: {
      const int b = scene.find_object("button");
      require(b >= 0, ErrorCode::invalid_task, "expert: missing button");
      const ObjectSpec& button = scene.objects[b];
      if (task_success(scene)) return {0.0, 0.0, 0.0};
      const double d = dist(scene.agent.row, scene.agent.col, button.row, button.col);
      if (d <= kPressRadius * 0.6) return {0.0, 0.0, 1.0};
      return move_toward(scene, button.row, button.col, max_step, 0.0);
    }
    case Task::stack_block: {
      const int b = scene.find_object("blue-block");
      require(b >= 0, ErrorCode::invalid_task, "expert: missing blue block");
      return grasp_carry_release("white-block", scene.objects[b].row + kStackOffsetRow,
                                 scene.objects[b].col, kStackRadius);
    }
    case Task::place_object: {
      const int p = scene.find_object("plate");
      require(p >= 0, ErrorCode::invalid_task, "expert: missing plate");
      return grasp_carry_release("fruit", scene.objects[p].row, scene.objects[p].col,
                                 kPlaceRadius);
    }
    case Task::fold_proxy:
      return grasp_carry_release("towel", scene.goal_row, scene.goal_col, kFoldRadius);
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace glue::env
