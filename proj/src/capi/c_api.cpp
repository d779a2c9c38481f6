#include "glue/c_api.h"

#include <cstring>

#include "glue/pipeline/report.hpp"
#include "glue/pipeline/visualize.hpp"

namespace {

thread_local std::string g_last_error;

glue_status set_error(const glue::GlueError& e) {
  g_last_error = e.what();
  return static_cast<glue_status>(e.code());
}

glue_status set_error_generic(const std::exception& e) {
  g_last_error = e.what();
  return GLUE_ERR_INTERNAL;
}

template <typename Fn>
glue_status guarded(Fn&& fn) {
  try {
    fn();
    return GLUE_OK;
  } catch (const glue::GlueError& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct glue_config {
  glue::pipeline::RunConfig cfg;
};

struct glue_env {
  glue::env::Environment environment;
  glue::Frame last_frame;
};

struct glue_policy {
  glue::pipeline::TrainedModel model;
  explicit glue_policy(glue::pipeline::TrainedModel m) : model(std::move(m)) {}
};

extern "C" {

const char* glue_version(void) { return "glue 0.1.0"; }

const char* glue_last_error(void) { return g_last_error.c_str(); }

void glue_string_free(char* s) { std::free(s); }

glue_config* glue_config_default(void) { return new glue_config(); }

glue_config* glue_config_load(const char* path) {
  glue_config* out = nullptr;
  const glue_status rc = guarded([&] {
    out = new glue_config{glue::pipeline::RunConfig::load(path ? path : "")};
  });
  return rc == GLUE_OK ? out : nullptr;
}

glue_status glue_config_set(glue_config* config, const char* key, const char* value) {
  if (!config || !key || !value) {
    g_last_error = "glue_config_set: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { config->cfg.set(key, value); });
}

char* glue_config_to_json(const glue_config* config) {
  if (!config) return nullptr;
  return dup_string(config->cfg.to_json().dump(2));
}

uint64_t glue_config_hash(const glue_config* config) { return config ? config->cfg.hash() : 0; }

void glue_config_free(glue_config* config) { delete config; }

glue_status glue_gen_demos(const glue_config* config, const char* out_dir, int* n_out) {
  if (!config || !out_dir) {
    g_last_error = "glue_gen_demos: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const int n = glue::pipeline::generate_demos(config->cfg, out_dir);
    if (n_out) *n_out = n;
  });
}

glue_status glue_train(const glue_config* config, const char* dataset_dir, const char* out_dir) {
  if (!config || !dataset_dir || !out_dir) {
    g_last_error = "glue_train: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { glue::pipeline::train(config->cfg, dataset_dir, out_dir); });
}

glue_status glue_eval(const glue_config* config, const char* checkpoint_path,
                      const char* out_path) {
  if (!config || !checkpoint_path || !out_path) {
    g_last_error = "glue_eval: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { glue::pipeline::evaluate(config->cfg, checkpoint_path, out_path); });
}

glue_status glue_visualize(const char* episode_dir, const char* track_log_path,
                           const char* extraction_record_path, const char* out_dir,
                           int* frames_out) {
  if (!episode_dir || !track_log_path || !out_dir) {
    g_last_error = "glue_visualize: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const int n = glue::pipeline::visualize(
        episode_dir, track_log_path, extraction_record_path ? extraction_record_path : "",
        out_dir);
    if (frames_out) *frames_out = n;
  });
}

glue_status glue_report_render(const char* const* report_paths, size_t n_reports, char** text_out,
                               char** json_out) {
  if (!report_paths || n_reports == 0) {
    g_last_error = "glue_report_render: no reports";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<glue::pipeline::EvalReport> reports;
    for (size_t i = 0; i < n_reports; ++i)
      reports.push_back(glue::pipeline::EvalReport::load(report_paths[i]));
    const glue::pipeline::ReportTable table = glue::pipeline::report_tables(reports);
    if (text_out) *text_out = dup_string(table.to_text());
    if (json_out) *json_out = dup_string(table.to_json().dump(2));
  });
}

glue_env* glue_env_create(const char* task, uint64_t seed, const char* perturbation,
                          uint64_t perturb_seed) {
  glue_env* out = nullptr;
  const glue_status rc = guarded([&] {
    auto env = std::make_unique<glue_env>();
    glue::env::Scene scene =
        glue::env::make_scene(glue::env::task_from_name(task ? task : ""), seed);
    const auto kind = glue::env::perturb_from_name(perturbation ? perturbation : "none");
    if (kind != glue::env::PerturbKind::none)
      scene = glue::env::apply_perturbation(scene, kind, perturb_seed);
    env->last_frame = env->environment.begin(scene);
    out = env.release();
  });
  return rc == GLUE_OK ? out : nullptr;
}

void glue_env_free(glue_env* env) { delete env; }

int glue_env_frame_size(const glue_env* env) {
  return env ? env->environment.scene().frame_size : 0;
}

glue_status glue_env_step(glue_env* env, const double action[3], int* done, int* success) {
  if (!env || !action) {
    g_last_error = "glue_env_step: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto result = env->environment.step({action[0], action[1], action[2]});
    env->last_frame = result.frame;
    if (done) *done = result.done ? 1 : 0;
    if (success) *success = result.success ? 1 : 0;
  });
}

glue_status glue_env_render(const glue_env* env, uint8_t* rgb_out) {
  if (!env || !rgb_out) {
    g_last_error = "glue_env_render: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(rgb_out, env->last_frame.rgb.data(), env->last_frame.rgb.size());
  return GLUE_OK;
}

glue_status glue_env_state(const glue_env* env, double state_out[7]) {
  if (!env || !state_out) {
    g_last_error = "glue_env_state: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  const auto s = env->environment.state7();
  for (int i = 0; i < 7; ++i) state_out[i] = s[i];
  return GLUE_OK;
}

glue_status glue_env_expert_action(const glue_env* env, double action_out[3]) {
  if (!env || !action_out) {
    g_last_error = "glue_env_expert_action: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto a = env->environment.expert_action();
    for (int i = 0; i < 3; ++i) action_out[i] = a[i];
  });
}

glue_policy* glue_policy_load(const char* checkpoint_path) {
  glue_policy* out = nullptr;
  const glue_status rc = guarded([&] {
    out = new glue_policy(glue::pipeline::load_checkpoint(checkpoint_path ? checkpoint_path : ""));
  });
  return rc == GLUE_OK ? out : nullptr;
}

void glue_policy_free(glue_policy* policy) { delete policy; }

glue_status glue_policy_rollout(glue_policy* policy, const char* task, uint64_t env_seed,
                                const char* perturbation, int execute_steps, int* success,
                                int* steps) {
  if (!policy || !task) {
    g_last_error = "glue_policy_rollout: null argument";
    return GLUE_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    glue::env::Scene scene = glue::env::make_scene(glue::env::task_from_name(task), env_seed);
    const auto kind = glue::env::perturb_from_name(perturbation ? perturbation : "none");
    if (kind != glue::env::PerturbKind::none)
      scene = glue::env::apply_perturbation(scene, kind,
                                            glue::derive_seed(env_seed, "perturb"));
    glue::env::Environment::Params params;
    params.max_steps = policy->model.config.max_steps;
    glue::env::Environment environment(params);
    glue::pipeline::GluePolicy runner(policy->model, env_seed);
    const auto rr = glue::pipeline::run_policy_episode(
        environment, scene, runner,
        execute_steps > 0 ? execute_steps : policy->model.config.execute_steps);
    if (success) *success = rr.success ? 1 : 0;
    if (steps) *steps = rr.steps;
  });
}

}  // extern "C"
