#pragma once

#include "glue/encoder/glue_encoder.hpp"
#include "glue/env/episode_record.hpp"
#include "glue/pipeline/run_config.hpp"

namespace glue::pipeline {

// Seeded expert demonstrations persisted as EpisodeRecords; only successful
// episodes are kept. Returns the number written. Byte-identical for a given
// config.
int generate_demos(const RunConfig& config, const std::string& out_dir);

struct DatasetIndex {
  std::string dir;
  std::string task;
  uint64_t seed = 0;
  std::vector<std::string> episode_dirs;  // absolute order = manifest order
};
DatasetIndex load_dataset_index(const std::string& dataset_dir);

// Per-frame artifacts the training loop consumes: stacked patchify rows of
// the resized frame for the learnable global encoder, gathered (occlusion-
// zeroed) local key-patch features from the frozen encoder, key-patch grid
// coordinates, and the padded robot state.
struct FrameFeatures {
  nn::MatF global_patch_rows;           // (196 x patch_in_dim)
  nn::MatF local_key_features;          // (N x 768)
  std::vector<std::array<int, 3>> key_patches;  // (x, y, visible)
  std::array<float, 7> state{};
};

struct EpisodeFeatures {
  std::vector<FrameFeatures> frames;
  std::vector<std::array<float, 3>> actions;  // raw (unnormalized)
  std::vector<Keypoint> keypoints;
  bool quarantined = false;
  std::string quarantine_reason;
};

// One-time per-episode preprocessing: first-frame extraction, oracle
// tracking with visibility thresholding, frozen local-grid encoding and
// gathering, global-input patchify. Results are cached on disk keyed by the
// config's preprocess hash; extraction and track-log text records are
// written next to the cache entries. Episodes whose extraction fails are
// quarantined with the reason logged, not fatal.
EpisodeFeatures preprocess_episode(const RunConfig& config, const env::EpisodeRecord& record,
                                   const encoder::GlueEncoder<float>& enc);

std::vector<EpisodeFeatures> load_or_build_cache(const RunConfig& config,
                                                 const DatasetIndex& index,
                                                 const encoder::GlueEncoder<float>& enc);

// Cache entry IO (binary, deterministic).
void save_episode_features(const std::string& path, const EpisodeFeatures& feats);
EpisodeFeatures load_episode_features(const std::string& path);

}  // namespace glue::pipeline
