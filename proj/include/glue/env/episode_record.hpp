#pragma once

#include "glue/env/environment.hpp"

namespace glue::env {

// Full record of one episode: frames, padded robot states, executed actions,
// and per-frame ground truth. Replayable bit-identically from seed + actions.
struct EpisodeRecord {
  Task task = Task::push_button;
  uint64_t seed = 0;
  PerturbKind perturbation = PerturbKind::none;
  uint64_t perturb_seed = 0;
  bool success = false;
  std::vector<Frame> frames;                    // 1-based indexing via frames[i-1]
  std::vector<std::array<float, 7>> states;     // state observed at each frame
  std::vector<std::array<float, 3>> actions;    // action taken at each frame (terminal: zero)
  std::vector<FrameGroundTruth> gt;
  std::vector<TextQuery> queries;
  std::vector<std::pair<std::string, std::string>> labels;  // (object_id, label)

  int length() const { return static_cast<int>(frames.size()); }
};

// Rolls the scripted expert in a fresh environment. The returned record has
// equal-length frame/state/action/gt sequences.
EpisodeRecord run_expert_episode(Task task, uint64_t seed, PerturbKind kind, uint64_t perturb_seed,
                                 const Environment::Params& params = {});

// Directory layout: manifest.json, frames/frame_%06d.png, states.bin,
// actions.bin, gt.bin.
void save_episode(const std::string& dir, const EpisodeRecord& record);
EpisodeRecord load_episode(const std::string& dir, bool load_frames = true);

}  // namespace glue::env
