#pragma once

#include "glue/nn/adam.hpp"
#include "glue/nn/checkpoint.hpp"
#include "glue/pipeline/dataset.hpp"
#include "glue/policy/sampler.hpp"
#include "glue/policy/training.hpp"

namespace glue::pipeline {

encoder::GlueEncoderConfig<float> make_encoder_config(const RunConfig& config);

// Everything a checkpoint restores for evaluation.
struct TrainedModel {
  RunConfig config;
  encoder::GlueEncoder<float> enc;
  policy::NoisePredictor<float> predictor;
  policy::DiffusionSchedule schedule;
  policy::ActionNormalizer normalizer;
  int epoch = 0;
  int64_t step = 0;

  explicit TrainedModel(const RunConfig& cfg);
};

void save_checkpoint(const std::string& path, TrainedModel& model, nn::Adam<float>* adam,
                     const Rng* batch_rng, const Rng* k_rng, const Rng* noise_rng);
TrainedModel load_checkpoint(const std::string& path);

struct TrainResult {
  std::string checkpoint_path;
  std::vector<double> epoch_losses;
  int quarantined_episodes = 0;
  int samples = 0;
};

// Full training pipeline: preprocess (cached), fit the action normalizer,
// then Adam over (global encoder [+ fusion] + noise predictor) with
// purpose-split random streams. Line-oriented metrics go to
// <out_dir>/train_log.txt; checkpoints embed the full config.
TrainResult train(const RunConfig& config, const std::string& dataset_dir,
                  const std::string& out_dir, const std::string& resume_from = "");

}  // namespace glue::pipeline
