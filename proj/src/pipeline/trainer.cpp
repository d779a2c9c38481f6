#include "glue/pipeline/trainer.hpp"

#include <cstdio>
#include <fstream>

#include "glue/core/io_util.hpp"

namespace glue::pipeline {

encoder::GlueEncoderConfig<float> make_encoder_config(const RunConfig& config) {
  encoder::GlueEncoderConfig<float> cfg;
  cfg.global_encoder = {14, config.enc_patch, 768, config.enc_pe_scale, true};
  cfg.local_encoder = {14, config.enc_patch, 768, config.enc_pe_scale, false};
  cfg.fusion = {768, 8, 256, 14, 28, config.enc_pe_scale};
  cfg.glue_s = config.glue_s();
  return cfg;
}

TrainedModel::TrainedModel(const RunConfig& cfg)
    : config(cfg),
      enc(make_encoder_config(cfg)),
      predictor(cfg.horizon, 3),
      schedule(policy::make_schedule(cfg.diffusion_k)) {
  enc.init(cfg.seed);
  Rng unet_rng = derive_stream(cfg.seed, "init.unet");
  predictor.init(unet_rng);
  normalizer.lo = nn::VecD::Constant(3, -1.0);
  normalizer.hi = nn::VecD::Constant(3, 1.0);
}

void save_checkpoint(const std::string& path, TrainedModel& model, nn::Adam<float>* adam,
                     const Rng* batch_rng, const Rng* k_rng, const Rng* noise_rng) {
  nn::TensorArchive arch;
  arch.meta["format"] = "glue-checkpoint/1";
  arch.meta["config"] = model.config.to_json();
  arch.meta["config_hash"] = model.config.hash_hex();
  arch.meta["epoch"] = model.epoch;
  arch.meta["step"] = model.step;
  arch.meta["fusion_branch_used"] = !model.config.glue_s();

  arch.put_params(model.enc.all_params());
  arch.put_params(model.predictor.params());
  arch.put("norm.lo", nn::MatD(model.normalizer.lo));
  arch.put("norm.hi", nn::MatD(model.normalizer.hi));

  if (adam) {
    nn::ParamList<float> trainable = model.enc.trainable_params();
    for (auto& p : model.predictor.params()) trainable.push_back(p);
    require(adam->moment1().size() == trainable.size(), ErrorCode::internal,
            "checkpoint: optimizer not attached to the trainable set");
    for (size_t i = 0; i < trainable.size(); ++i) {
      arch.put("adam.m." + trainable[i].name, adam->moment1()[i]);
      arch.put("adam.v." + trainable[i].name, adam->moment2()[i]);
    }
    arch.meta["adam_step"] = adam->step_count();
    arch.meta["lr"] = adam->learning_rate();
  }
  if (batch_rng) arch.meta["rng_batch"] = batch_rng->state();
  if (k_rng) arch.meta["rng_k"] = k_rng->state();
  if (noise_rng) arch.meta["rng_noise"] = noise_rng->state();
  arch.save(path);
}

TrainedModel load_checkpoint(const std::string& path) {
  nn::TensorArchive arch = nn::TensorArchive::load(path);
  require(arch.meta.value("format", "") == "glue-checkpoint/1", ErrorCode::bad_checkpoint,
          path + ": not a checkpoint");
  TrainedModel model(RunConfig::from_json(arch.meta.at("config")));
  arch.load_params(model.enc.all_params());
  arch.load_params(model.predictor.params());
  model.normalizer.lo = arch.get("norm.lo").cast<double>();
  model.normalizer.hi = arch.get("norm.hi").cast<double>();
  model.epoch = arch.meta.value("epoch", 0);
  model.step = arch.meta.value("step", int64_t{0});
  return model;
}

namespace {

struct SampleRef {
  int episode;
  int t;
};

double grad_norm(const nn::ParamList<float>& params) {
  double sum = 0.0;
  for (const auto& p : params) sum += static_cast<double>(p.grad->squaredNorm());
  return std::sqrt(sum);
}

}  // namespace

TrainResult train(const RunConfig& config, const std::string& dataset_dir,
                  const std::string& out_dir, const std::string& resume_from) {
  ensure_dir(out_dir);
  const DatasetIndex index = load_dataset_index(dataset_dir);
  require(index.task == config.task, ErrorCode::bad_config,
          "train: dataset task '" + index.task + "' != config task '" + config.task + "'");

  TrainedModel model(config);
  const std::vector<EpisodeFeatures> episodes = load_or_build_cache(config, index, model.enc);

  TrainResult result;
  std::vector<SampleRef> samples;
  std::vector<nn::MatD> all_chunks;
  for (size_t e = 0; e < episodes.size(); ++e) {
    if (episodes[e].quarantined) {
      ++result.quarantined_episodes;
      continue;
    }
    for (int t = 0; t < static_cast<int>(episodes[e].frames.size()); ++t) {
      samples.push_back({static_cast<int>(e), t});
      all_chunks.push_back(policy::chunk_at(episodes[e].actions, t, config.horizon));
    }
  }
  require(!samples.empty(), ErrorCode::bad_config, "train: no usable samples in dataset");
  result.samples = static_cast<int>(samples.size());
  model.normalizer = policy::ActionNormalizer::fit(all_chunks);

  // purpose-split streams so glue / glue-s runs draw identically
  Rng batch_rng = derive_stream(config.seed, "train.batch");
  Rng k_rng = derive_stream(config.seed, "train.k");
  Rng noise_rng = derive_stream(config.seed, "train.noise");

  nn::ParamList<float> trainable = model.enc.trainable_params();
  for (auto& p : model.predictor.params()) trainable.push_back(p);
  nn::Adam<float> adam(config.lr);
  adam.attach(trainable);

  int start_epoch = 0;
  if (!resume_from.empty()) {
    nn::TensorArchive arch = nn::TensorArchive::load(resume_from);
    require(arch.meta.value("config_hash", "") == config.hash_hex(), ErrorCode::bad_checkpoint,
            "resume: checkpoint config differs from the requested config");
    arch.load_params(model.enc.all_params());
    arch.load_params(model.predictor.params());
    model.normalizer.lo = arch.get("norm.lo").cast<double>();
    model.normalizer.hi = arch.get("norm.hi").cast<double>();
    model.epoch = arch.meta.at("epoch");
    model.step = arch.meta.at("step");
    for (size_t i = 0; i < trainable.size(); ++i) {
      adam.moment1()[i] = arch.get("adam.m." + trainable[i].name);
      adam.moment2()[i] = arch.get("adam.v." + trainable[i].name);
    }
    adam.set_step_count(arch.meta.at("adam_step"));
    batch_rng.set_state(arch.meta.at("rng_batch"));
    k_rng.set_state(arch.meta.at("rng_k"));
    noise_rng.set_state(arch.meta.at("rng_noise"));
    start_epoch = model.epoch;
  }

  std::ofstream log(out_dir + "/train_log.txt", resume_from.empty() ? std::ios::trunc
                                                                    : std::ios::app);
  require(log.good(), ErrorCode::io_error, "train: cannot open log");

  const int n_patches = 196;
  const nn::MatF pe_table =
      nn::grid_pe_table<float>(28, 768, model.enc.config().fusion.pe_scale);
  const bool glue_s = config.glue_s();

  std::vector<int> perm(samples.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);

  for (int epoch = start_epoch; epoch < config.epochs; ++epoch) {
    // Fisher-Yates from the batch stream
    for (size_t i = perm.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(batch_rng.uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(perm[i - 1], perm[j]);
    }
    double epoch_loss = 0.0;
    int batches = 0;
    for (size_t start = 0; start < perm.size(); start += config.batch_size) {
      const int B = static_cast<int>(std::min<size_t>(config.batch_size, perm.size() - start));
      const int n_keys = static_cast<int>(
          episodes[samples[perm[start]].episode].frames[0].key_patches.size());

      const int in_dim = static_cast<int>(model.enc.global_encoder().projection().in_dim());
      nn::MatF x_all(B * n_patches, in_dim);
      nn::MatF l_all(B * n_keys, 768);
      nn::MatF pe_all(B * n_keys, 768);
      std::vector<std::array<float, 7>> states(B);
      std::vector<nn::MatF> chunks(B);
      for (int b = 0; b < B; ++b) {
        const SampleRef& ref = samples[perm[start + b]];
        const FrameFeatures& ff = episodes[ref.episode].frames[ref.t];
        require(static_cast<int>(ff.key_patches.size()) == n_keys, ErrorCode::internal,
                "train: key-patch count varies within one task");
        x_all.middleRows(b * n_patches, n_patches) = ff.global_patch_rows;
        l_all.middleRows(b * n_keys, n_keys) = ff.local_key_features;
        for (int p = 0; p < n_keys; ++p)
          pe_all.row(b * n_keys + p) = pe_table.row(ff.key_patches[p][0] * 28 +
                                                    ff.key_patches[p][1]);
        states[b] = ff.state;
        chunks[b] = model.normalizer
                        .normalize_rows(policy::chunk_at(episodes[ref.episode].actions, ref.t,
                                                         config.horizon))
                        .cast<float>();
      }

      nn::zero_grads(trainable);

      perception::ToyVitEncoder<float>::BatchCache gcache;
      nn::MatF patches, cls;
      model.enc.global_encoder().forward_batch(x_all, B, patches, cls, gcache);

      nn::FusionModule<float>::Cache fcache;
      nn::MatF fprime = nn::MatF::Zero(B, 256);
      if (!glue_s) fprime = model.enc.fusion().forward_batch(patches, l_all, pe_all, B, fcache);

      std::vector<policy::TrainItem<float>> batch(B);
      for (int b = 0; b < B; ++b) {
        nn::VecF state_vec(7);
        for (int i = 0; i < 7; ++i) state_vec(i) = states[b][i];
        batch[b].condition = encoder::assemble_condition<float>(
            fprime.row(b).transpose(), cls.row(b).transpose(), state_vec);
        batch[b].clean = chunks[b];
      }

      std::vector<nn::VecF> d_conds;
      const double loss =
          policy::training_step(model.predictor, model.schedule, batch, k_rng, noise_rng, &d_conds);

      nn::MatF d_fprime(B, 256), d_cls(B, 768);
      for (int b = 0; b < B; ++b) {
        d_fprime.row(b) = d_conds[b].segment(0, 256).transpose();
        d_cls.row(b) = d_conds[b].segment(256, 768).transpose();
      }
      nn::MatF d_patches = nn::MatF::Zero(B * n_patches, 768);
      if (!glue_s) model.enc.fusion().backward_batch(d_fprime, fcache, &d_patches, nullptr);
      model.enc.global_encoder().backward_batch(d_patches, d_cls, gcache);

      const double gnorm = grad_norm(trainable);
      adam.step(trainable);
      ++model.step;
      epoch_loss += loss;
      ++batches;
      char line[160];
      std::snprintf(line, sizeof(line), "step %lld loss %.6f grad_norm %.6f lr %.6g\n",
                    static_cast<long long>(model.step), loss, gnorm, adam.learning_rate());
      log << line;
    }
    model.epoch = epoch + 1;
    result.epoch_losses.push_back(epoch_loss / std::max(1, batches));
    log << "epoch " << model.epoch << " mean_loss " << result.epoch_losses.back() << "\n";
    log.flush();

    if (config.checkpoint_every > 0 && model.epoch % config.checkpoint_every == 0 &&
        model.epoch < config.epochs) {
      char name[64];
      std::snprintf(name, sizeof(name), "checkpoint_epoch_%04d.gta", model.epoch);
      save_checkpoint(out_dir + "/" + name, model, &adam, &batch_rng, &k_rng, &noise_rng);
    }
  }

  result.checkpoint_path = out_dir + "/checkpoint.gta";
  save_checkpoint(result.checkpoint_path, model, &adam, &batch_rng, &k_rng, &noise_rng);
  write_text_file(out_dir + "/config.json", config.to_json().dump(2) + "\n");
  return result;
}

}  // namespace glue::pipeline
