#pragma once

#include "glue/env/scene.hpp"

namespace glue::env {

enum class PerturbKind { none, clutter, occlusion, illumination };

PerturbKind perturb_from_name(const std::string& name);
std::string perturb_name(PerturbKind kind);

// Seeded scene construction for a task (object placement only; no frame yet).
Scene make_scene(Task task, uint64_t seed);

// Pure scene transform realizing the OOD families: clutter adds 5-15
// distractors clear of task objects, occlusion adds one large foreground
// occluder covering 30-70% of a task object, illumination enables a
// time-varying RGB gain. Throws PlacementFailure after 100 rejected draws.
Scene apply_perturbation(const Scene& scene, PerturbKind kind, uint64_t seed);

struct StepResult {
  Frame frame;
  bool done = false;
  bool success = false;
};

// Kinematic 2-D tabletop world. Actions are normalized [-1,1]^3:
// (row delta, col delta, gripper); deltas scale by max_step_px, gripper
// closes above +0.5 and opens below -0.5. Grasping is proximity attachment.
class Environment {
 public:
  struct Params {
    double max_step_px = 12.0;
    double attach_radius = 16.0;
    int max_steps = 80;
  };

  Environment() = default;
  explicit Environment(const Params& params) : params_(params) {}

  // Convenience: make_scene + begin.
  Frame reset(Task task, uint64_t seed);

  // Start an episode from an explicit (possibly perturbed) scene.
  Frame begin(const Scene& scene);

  StepResult step(const std::array<double, 3>& action);

  const Scene& scene() const { return scene_; }
  int frame_count() const { return frame_count_; }  // frames rendered so far
  int steps_taken() const { return steps_; }
  bool success() const;
  bool done() const { return done_; }

  const Params& params() const { return params_; }

  // Ground truth for a rendered frame (1-based index).
  const FrameGroundTruth& ground_truth(int frame_index) const;
  const std::vector<FrameGroundTruth>& ground_truth_history() const { return gt_; }

  // 7-dim padded robot state for the current scene.
  std::array<float, 7> state7() const;

  // Scripted expert action for the current scene (pure function of scene).
  std::array<double, 3> expert_action() const;

 private:
  Frame render_and_record();

  Params params_;
  Scene scene_;
  int frame_count_ = 0;
  int steps_ = 0;
  bool done_ = false;
  std::vector<FrameGroundTruth> gt_;
};

std::array<double, 3> scripted_expert(const Scene& scene, const Environment::Params& params);
bool task_success(const Scene& scene);

// Kinematic transition shared by Environment::step and expert lookahead:
// clips the action, moves the gripper (clamped to frame bounds), carries the
// attached object rigidly, applies gripper open/close with proximity
// attachment. Returns per-object (dr, dc).
std::vector<std::pair<double, double>> apply_action(Scene& scene,
                                                    const std::array<double, 3>& action,
                                                    const Environment::Params& params);

}  // namespace glue::env
