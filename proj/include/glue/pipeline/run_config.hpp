#pragma once

#include <json.hpp>

#include <string>

namespace glue::pipeline {

// Resolved run configuration; serialized into every output directory.
struct RunConfig {
  std::string task = "push-button";
  uint64_t seed = 1;

  // demo generation
  int episodes = 50;
  int demo_retries = 3;

  // extraction
  int n_cluster = 15;  // per object
  int n_grid = 4;
  int kmeans_restarts = 8;
  double sem_pe_scale = 0.0;  // semantic-mapping encoder position mixing

  // tracking
  double tau = 0.5;

  // encoders / fusion
  int enc_patch = 4;        // toy ViT patch size; native input = 14 * enc_patch
  double enc_pe_scale = 1.0;

  // diffusion policy
  int horizon = 16;
  int execute_steps = 8;
  int diffusion_k = 100;
  int diffusion_k_infer = 10;

  // training
  int epochs = 20;
  int batch_size = 16;
  double lr = 1e-3;
  int checkpoint_every = 0;  // epochs; 0 = final only

  // evaluation protocol
  int eval_in_domain = 20;
  int eval_ood = 10;

  // environment
  int max_steps = 80;

  std::string backend = "oracle";  // oracle | adapter
  std::string ablation = "glue";   // glue | glue-s
  std::string data_root;           // defaults to $GLUE_DATA_ROOT or "."

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);

  // Applies "key=value" style overrides (string values parsed by key type).
  void set(const std::string& key, const std::string& value);

  void validate() const;

  // FNV-1a over the canonical JSON dump.
  uint64_t hash() const;
  std::string hash_hex() const;

  // Hash over the fields that determine preprocessing artifacts (extraction,
  // tracking, cached local features); ablation excluded so paired runs share
  // the cache.
  std::string preprocess_hash_hex() const;

  std::string resolved_data_root() const;
  bool glue_s() const { return ablation == "glue-s"; }
};

}  // namespace glue::pipeline
