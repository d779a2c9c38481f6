#include "glue/pipeline/evaluator.hpp"

#include <chrono>

#include "glue/core/io_util.hpp"
#include "glue/extract/extraction.hpp"

namespace glue::pipeline {

RolloutResult run_policy_episode(env::Environment& environment, const env::Scene& scene,
                                 RolloutPolicy& policy, int execute_steps) {
  RolloutResult result;
  Frame frame = environment.begin(scene);
  try {
    policy.begin_episode(environment, frame);
  } catch (const GlueError& e) {
    result.error = e.what();
    result.steps = 0;
    return result;
  }
  while (!environment.done()) {
    std::vector<std::array<double, 3>> actions;
    try {
      actions = policy.plan(environment);
    } catch (const GlueError& e) {
      result.error = e.what();
      break;
    }
    require(!actions.empty(), ErrorCode::internal, "policy returned an empty plan");
    const int n = std::min<int>(execute_steps, static_cast<int>(actions.size()));
    for (int i = 0; i < n && !environment.done(); ++i) {
      env::StepResult sr = environment.step(actions[i]);
      policy.observe(environment, sr.frame);
      if (sr.done) {
        result.success = sr.success;
        break;
      }
    }
  }
  result.success = result.success || environment.success();
  result.steps = environment.steps_taken();
  return result;
}

std::vector<std::array<double, 3>> ExpertRolloutPolicy::plan(
    const env::Environment& environment) {
  env::Scene lookahead = environment.scene();
  std::vector<std::array<double, 3>> actions;
  actions.reserve(horizon_);
  for (int i = 0; i < horizon_; ++i) {
    const auto a = env::scripted_expert(lookahead, environment.params());
    env::apply_action(lookahead, a, environment.params());
    actions.push_back(a);
  }
  return actions;
}

GluePolicy::GluePolicy(TrainedModel& model, uint64_t episode_seed)
    : model_(&model),
      chunk_rng_(derive_seed(episode_seed, "policy.noise")),
      episode_seed_(episode_seed) {}

void GluePolicy::begin_episode(const env::Environment& environment, const Frame& first_frame) {
  gt_ = std::make_unique<perception::EnvGroundTruth>(environment);
  tracker_ = std::make_unique<perception::OracleTracker>(*gt_);
  const perception::OracleDetector detector(*gt_);
  const perception::OracleSegmenter segmenter(*gt_);
  perception::ToyVitConfig sem_cfg{14, model_->config.enc_patch, 768, model_->config.sem_pe_scale,
                                   false};
  const perception::ToyPatchEncoderBackend sem_encoder(
      sem_cfg, derive_seed(model_->config.seed, "init.encoder_semantic"));

  extract::ExtractionConfig ext_cfg;
  ext_cfg.n_cluster = model_->config.n_cluster;
  ext_cfg.n_grid = model_->config.n_grid;
  ext_cfg.seed = derive_seed(episode_seed_, "extract");
  ext_cfg.kmeans.restarts = model_->config.kmeans_restarts;

  const auto queries = env::task_queries(environment.scene().task);
  const auto keypoints = extract::extract_initial_keypoints(first_frame, queries, detector,
                                                            segmenter, sem_encoder, ext_cfg);
  session_ = std::make_unique<track::TrackerSession>(keypoints, first_frame);
  last_frame_ = first_frame;
}

void GluePolicy::observe(const env::Environment&, const Frame& frame) {
  session_->advance(frame, *tracker_);
  last_frame_ = frame;
}

std::vector<std::array<double, 3>> GluePolicy::plan(const env::Environment& environment) {
  require(session_ != nullptr, ErrorCode::internal, "plan before begin_episode");
  const auto thresholded =
      track::threshold_visibility(session_->current_states(), model_->config.tau);
  const auto patches =
      encoder::locate_key_patches(thresholded, last_frame_.height, last_frame_.width);
  const nn::VecF w = model_->enc.condition(last_frame_, patches, environment.state7());
  const nn::MatF chunk = policy::sample_chunk(model_->predictor, model_->schedule, w,
                                              model_->config.diffusion_k_infer, chunk_rng_);
  const nn::MatD raw = model_->normalizer.denormalize_rows(chunk.cast<double>());
  std::vector<std::array<double, 3>> actions(raw.rows());
  for (Eigen::Index r = 0; r < raw.rows(); ++r) actions[r] = {raw(r, 0), raw(r, 1), raw(r, 2)};
  return actions;
}

int EvalCondition::successes() const {
  int n = 0;
  for (const auto& e : episodes) n += e.success ? 1 : 0;
  return n;
}

double EvalCondition::rate() const {
  return episodes.empty() ? 0.0 : static_cast<double>(successes()) / episodes.size();
}

const EvalCondition* EvalReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json EvalReport::to_json(bool canonical) const {
  nlohmann::json j;
  j["format"] = "glue-eval-report/1";
  j["task"] = task;
  j["ablation"] = ablation;
  j["config_hash"] = config_hash;
  j["checkpoint"] = checkpoint;
  j["seed"] = seed;
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : conditions) {
    nlohmann::json episodes = nlohmann::json::array();
    for (const auto& e : c.episodes)
      episodes.push_back({{"index", e.index},
                          {"env_seed", e.env_seed},
                          {"success", e.success},
                          {"steps", e.steps},
                          {"error", e.error}});
    conds.push_back({{"name", c.name},
                     {"episodes", episodes},
                     {"successes", c.successes()},
                     {"count", c.episodes.size()},
                     {"rate", c.rate()}});
  }
  j["conditions"] = conds;
  if (!canonical) j["wall_clock_sec"] = wall_clock_sec;
  return j;
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  require(j.value("format", "") == "glue-eval-report/1", ErrorCode::io_error,
          "eval report: bad format tag");
  EvalReport r;
  r.task = j.at("task");
  r.ablation = j.at("ablation");
  r.config_hash = j.at("config_hash");
  r.checkpoint = j.at("checkpoint");
  r.seed = j.at("seed");
  for (const auto& c : j.at("conditions")) {
    EvalCondition cond;
    cond.name = c.at("name");
    for (const auto& e : c.at("episodes")) {
      EvalEpisodeResult ep;
      ep.index = e.at("index");
      ep.env_seed = e.at("env_seed");
      ep.success = e.at("success");
      ep.steps = e.at("steps");
      ep.error = e.at("error");
      cond.episodes.push_back(ep);
    }
    // report integrity: stored aggregates must re-derive from the episodes
    require(c.at("successes") == cond.successes() &&
                c.at("count") == cond.episodes.size(),
            ErrorCode::io_error, "eval report: aggregate/episode mismatch");
    r.conditions.push_back(std::move(cond));
  }
  r.wall_clock_sec = j.value("wall_clock_sec", 0.0);
  return r;
}

void EvalReport::save(const std::string& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

EvalReport EvalReport::load(const std::string& path) {
  return from_json(nlohmann::json::parse(read_text_file(path)));
}

EvalReport evaluate_with_policy(const RunConfig& config, const PolicyFactory& factory,
                                const std::string& checkpoint_label) {
  const auto t0 = std::chrono::steady_clock::now();
  const env::Task task = env::task_from_name(config.task);
  env::Environment::Params params;
  params.max_steps = config.max_steps;

  EvalReport report;
  report.task = config.task;
  report.ablation = config.ablation;
  report.config_hash = config.hash_hex();
  report.checkpoint = checkpoint_label;
  report.seed = config.seed;

  const std::vector<std::pair<std::string, int>> protocol = {
      {"in-domain", config.eval_in_domain},
      {"clutter", config.eval_ood},
      {"occlusion", config.eval_ood},
      {"illumination", config.eval_ood}};
  for (const auto& [name, count] : protocol) {
    EvalCondition cond;
    cond.name = name;
    const env::PerturbKind kind = env::perturb_from_name(name == "in-domain" ? "none" : name);
    for (int i = 0; i < count; ++i) {
      EvalEpisodeResult ep;
      ep.index = i;
      ep.env_seed = derive_seed(config.seed, "eval." + name, i);
      env::Scene scene = env::make_scene(task, ep.env_seed);
      if (kind != env::PerturbKind::none)
        scene = env::apply_perturbation(scene, kind, derive_seed(ep.env_seed, "perturb"));
      env::Environment environment(params);
      auto policy = factory(ep.env_seed);
      const RolloutResult rr = run_policy_episode(environment, scene, *policy, config.execute_steps);
      ep.success = rr.success;
      ep.steps = rr.steps;
      ep.error = rr.error;
      cond.episodes.push_back(std::move(ep));
    }
    report.conditions.push_back(std::move(cond));
  }
  report.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

EvalReport evaluate(const RunConfig& config, const std::string& checkpoint_path,
                    const std::string& out_path) {
  TrainedModel model = load_checkpoint(checkpoint_path);
  require(model.config.task == config.task, ErrorCode::bad_config,
          "evaluate: checkpoint task differs from requested task");
  EvalReport report = evaluate_with_policy(
      config,
      [&](uint64_t episode_seed) { return std::make_unique<GluePolicy>(model, episode_seed); },
      checkpoint_path);
  if (!out_path.empty()) report.save(out_path);
  return report;
}

}  // namespace glue::pipeline
