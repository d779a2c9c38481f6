#pragma once

#include <functional>
#include <memory>

#include "glue/perception/oracle.hpp"
#include "glue/pipeline/trainer.hpp"
#include "glue/track/session.hpp"

namespace glue::pipeline {

struct RolloutResult {
  bool success = false;
  int steps = 0;
  std::string error;  // non-empty when the policy aborted (e.g. extraction failure)
};

// Receding-horizon actor interface: observe every frame, plan a chunk on
// demand; run_policy_episode executes the first execute_steps actions of
// each plan.
class RolloutPolicy {
 public:
  virtual ~RolloutPolicy() = default;
  virtual void begin_episode(const env::Environment& environment, const Frame& first_frame) = 0;
  virtual void observe(const env::Environment& environment, const Frame& frame) = 0;
  virtual std::vector<std::array<double, 3>> plan(const env::Environment& environment) = 0;
};

RolloutResult run_policy_episode(env::Environment& environment, const env::Scene& scene,
                                 RolloutPolicy& policy, int execute_steps);

// Upper-bound stub: plans by rolling the scripted expert on a scene copy.
class ExpertRolloutPolicy : public RolloutPolicy {
 public:
  explicit ExpertRolloutPolicy(int horizon) : horizon_(horizon) {}
  void begin_episode(const env::Environment&, const Frame&) override {}
  void observe(const env::Environment&, const Frame&) override {}
  std::vector<std::array<double, 3>> plan(const env::Environment& environment) override;

 private:
  int horizon_;
};

// The trained GLUE policy: one-time extraction on the first frame, streaming
// tracking, condition assembly, diffusion chunk sampling.
class GluePolicy : public RolloutPolicy {
 public:
  GluePolicy(TrainedModel& model, uint64_t episode_seed);
  void begin_episode(const env::Environment& environment, const Frame& first_frame) override;
  void observe(const env::Environment& environment, const Frame& frame) override;
  std::vector<std::array<double, 3>> plan(const env::Environment& environment) override;

 private:
  TrainedModel* model_;
  Rng chunk_rng_;
  uint64_t episode_seed_;
  std::unique_ptr<perception::EnvGroundTruth> gt_;
  std::unique_ptr<perception::OracleTracker> tracker_;
  std::unique_ptr<track::TrackerSession> session_;
  Frame last_frame_;
};

struct EvalEpisodeResult {
  int index = 0;
  uint64_t env_seed = 0;
  bool success = false;
  int steps = 0;
  std::string error;
};

struct EvalCondition {
  std::string name;  // in-domain | clutter | occlusion | illumination
  std::vector<EvalEpisodeResult> episodes;
  int successes() const;
  double rate() const;
};

struct EvalReport {
  std::string task;
  std::string ablation;
  std::string config_hash;
  std::string checkpoint;
  uint64_t seed = 0;
  std::vector<EvalCondition> conditions;
  double wall_clock_sec = 0.0;

  const EvalCondition* find(const std::string& name) const;
  // canonical form excludes wall clock: two runs of the same config must
  // produce byte-identical canonical dumps
  nlohmann::json to_json(bool canonical = false) const;
  static EvalReport from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static EvalReport load(const std::string& path);
};

using PolicyFactory = std::function<std::unique_ptr<RolloutPolicy>(uint64_t episode_seed)>;

// Seeded rollouts per condition; per-episode failures are recorded, never
// fatal. Conditions: in-domain x eval_in_domain, each OOD family x eval_ood.
EvalReport evaluate_with_policy(const RunConfig& config, const PolicyFactory& factory,
                                const std::string& checkpoint_label);

EvalReport evaluate(const RunConfig& config, const std::string& checkpoint_path,
                    const std::string& out_path = "");

}  // namespace glue::pipeline
