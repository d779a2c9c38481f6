/* C interface to the GLUE runtime: opaque handles, integer status codes,
 * thread-local error messages. The CLI and other language bindings link
 * against this surface only. */
#ifndef GLUE_C_API_H
#define GLUE_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int glue_status;

enum {
  GLUE_OK = 0,
  GLUE_ERR_INVALID_ARGUMENT = 1,
  GLUE_ERR_UNRESOLVED_QUERY = 2,
  GLUE_ERR_EMPTY_MASK = 3,
  GLUE_ERR_RESOLUTION_MISMATCH = 4,
  GLUE_ERR_TRACKER_FAILURE = 5,
  GLUE_ERR_MASK_TOO_SMALL = 6,
  GLUE_ERR_EMPTY_TRACK_SET = 7,
  GLUE_ERR_DIMENSION_MISMATCH = 8,
  GLUE_ERR_INVALID_TASK = 9,
  GLUE_ERR_PLACEMENT_FAILURE = 10,
  GLUE_ERR_EXPERT_FAILURE = 11,
  GLUE_ERR_IO = 12,
  GLUE_ERR_BAD_CONFIG = 13,
  GLUE_ERR_BAD_CHECKPOINT = 14,
  GLUE_ERR_PROTOCOL_MISMATCH = 15,
  GLUE_ERR_INTERNAL = 16
};

const char* glue_version(void);

/* Message for the most recent failing call on this thread. */
const char* glue_last_error(void);

/* Frees strings returned by glue_*_to_json / glue_report_render. */
void glue_string_free(char* s);

/* ---- configuration ---- */

typedef struct glue_config glue_config;

glue_config* glue_config_default(void);
glue_config* glue_config_load(const char* path);
glue_status glue_config_set(glue_config* config, const char* key, const char* value);
char* glue_config_to_json(const glue_config* config);
uint64_t glue_config_hash(const glue_config* config);
void glue_config_free(glue_config* config);

/* ---- pipeline verbs ---- */

/* Writes seeded expert demonstrations under out_dir; returns the episode
 * count written via n_out (may be NULL). */
glue_status glue_gen_demos(const glue_config* config, const char* out_dir, int* n_out);

glue_status glue_train(const glue_config* config, const char* dataset_dir, const char* out_dir);

/* Evaluates a checkpoint under the config's protocol; writes the report JSON
 * to out_path. */
glue_status glue_eval(const glue_config* config, const char* checkpoint_path,
                      const char* out_path);

/* Overlay emission: episode directory + track log (+ optional extraction
 * record for per-object colors; pass NULL or ""). */
glue_status glue_visualize(const char* episode_dir, const char* track_log_path,
                           const char* extraction_record_path, const char* out_dir,
                           int* frames_out);

/* Renders the comparison table across report files. text_out receives the
 * plain-text table, json_out the machine-readable form; either may be NULL.
 * Free both with glue_string_free. */
glue_status glue_report_render(const char* const* report_paths, size_t n_reports, char** text_out,
                               char** json_out);

/* ---- environment handle ---- */

typedef struct glue_env glue_env;

/* task: push-button | stack-block | place-object | fold-proxy.
 * perturbation: none | clutter | occlusion | illumination. */
glue_env* glue_env_create(const char* task, uint64_t seed, const char* perturbation,
                          uint64_t perturb_seed);
void glue_env_free(glue_env* env);

int glue_env_frame_size(const glue_env* env);

/* action: (row delta, col delta, gripper) in [-1, 1]. */
glue_status glue_env_step(glue_env* env, const double action[3], int* done, int* success);

/* rgb_out must hold frame_size*frame_size*3 bytes; copies the latest frame. */
glue_status glue_env_render(const glue_env* env, uint8_t* rgb_out);

/* 7-dim padded robot state. */
glue_status glue_env_state(const glue_env* env, double state_out[7]);

/* Scripted expert action for the current scene. */
glue_status glue_env_expert_action(const glue_env* env, double action_out[3]);

/* ---- policy handle ---- */

typedef struct glue_policy glue_policy;

glue_policy* glue_policy_load(const char* checkpoint_path);
void glue_policy_free(glue_policy* policy);

/* Runs one seeded episode (fresh environment) with the receding-horizon
 * loop; success/steps are written on return. */
glue_status glue_policy_rollout(glue_policy* policy, const char* task, uint64_t env_seed,
                                const char* perturbation, int execute_steps, int* success,
                                int* steps);

#ifdef __cplusplus
}
#endif

#endif /* GLUE_C_API_H */
