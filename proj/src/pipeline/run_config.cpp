#include "glue/pipeline/run_config.hpp"

#include <cstdlib>

#include "glue/core/error.hpp"
#include "glue/core/io_util.hpp"
#include "glue/core/rng.hpp"
#include "glue/env/scene.hpp"

namespace glue::pipeline {

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{{"task", task},
                        {"seed", seed},
                        {"episodes", episodes},
                        {"demo_retries", demo_retries},
                        {"n_cluster", n_cluster},
                        {"n_grid", n_grid},
                        {"kmeans_restarts", kmeans_restarts},
                        {"sem_pe_scale", sem_pe_scale},
                        {"tau", tau},
                        {"enc_patch", enc_patch},
                        {"enc_pe_scale", enc_pe_scale},
                        {"horizon", horizon},
                        {"execute_steps", execute_steps},
                        {"diffusion_k", diffusion_k},
                        {"diffusion_k_infer", diffusion_k_infer},
                        {"epochs", epochs},
                        {"batch_size", batch_size},
                        {"lr", lr},
                        {"checkpoint_every", checkpoint_every},
                        {"eval_in_domain", eval_in_domain},
                        {"eval_ood", eval_ood},
                        {"max_steps", max_steps},
                        {"backend", backend},
                        {"ablation", ablation},
                        {"data_root", data_root}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("task", c.task);
  get("seed", c.seed);
  get("episodes", c.episodes);
  get("demo_retries", c.demo_retries);
  get("n_cluster", c.n_cluster);
  get("n_grid", c.n_grid);
  get("kmeans_restarts", c.kmeans_restarts);
  get("sem_pe_scale", c.sem_pe_scale);
  get("tau", c.tau);
  get("enc_patch", c.enc_patch);
  get("enc_pe_scale", c.enc_pe_scale);
  get("horizon", c.horizon);
  get("execute_steps", c.execute_steps);
  get("diffusion_k", c.diffusion_k);
  get("diffusion_k_infer", c.diffusion_k_infer);
  get("epochs", c.epochs);
  get("batch_size", c.batch_size);
  get("lr", c.lr);
  get("checkpoint_every", c.checkpoint_every);
  get("eval_in_domain", c.eval_in_domain);
  get("eval_ood", c.eval_ood);
  get("max_steps", c.max_steps);
  get("backend", c.backend);
  get("ablation", c.ablation);
  get("data_root", c.data_root);
  for (auto it = j.begin(); it != j.end(); ++it)
    require(c.to_json().contains(it.key()), ErrorCode::bad_config,
            "config: unknown key '" + it.key() + "'");
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::bad_config, "config " + path + ": " + e.what());
  }
  return from_json(j);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  nlohmann::json j = to_json();
  require(j.contains(key), ErrorCode::bad_config, "config: unknown key '" + key + "'");
  nlohmann::json& slot = j.at(key);
  try {
    if (slot.is_string()) {
      slot = value;
    } else if (slot.is_number_float()) {
      slot = std::stod(value);
    } else {
      slot = static_cast<int64_t>(std::stoll(value));
    }
  } catch (const std::exception&) {
    raise(ErrorCode::bad_config, "config: cannot parse '" + value + "' for key '" + key + "'");
  }
  *this = from_json(j);
}

void RunConfig::validate() const {
  env::task_from_name(task);  // throws on unknown task
  require(episodes >= 1, ErrorCode::bad_config, "config: episodes >= 1");
  require(n_cluster >= 1, ErrorCode::bad_config, "config: n_cluster >= 1");
  require(n_grid >= 1, ErrorCode::bad_config, "config: n_grid >= 1");
  require(tau > 0.0 && tau < 1.0, ErrorCode::bad_config, "config: tau in (0,1)");
  require(horizon >= 4 && horizon % 4 == 0, ErrorCode::bad_config,
          "config: horizon must be a positive multiple of 4");
  require(execute_steps >= 1 && execute_steps <= horizon, ErrorCode::bad_config,
          "config: 1 <= execute_steps <= horizon");
  require(diffusion_k >= 1, ErrorCode::bad_config, "config: diffusion_k >= 1");
  require(diffusion_k_infer >= 1 && diffusion_k_infer <= diffusion_k, ErrorCode::bad_config,
          "config: 1 <= diffusion_k_infer <= diffusion_k");
  require(epochs >= 1 && batch_size >= 1, ErrorCode::bad_config,
          "config: epochs and batch_size >= 1");
  require(lr > 0.0, ErrorCode::bad_config, "config: lr > 0");
  require(enc_patch >= 1 && enc_patch <= 36, ErrorCode::bad_config,
          "config: enc_patch in [1, 36]");
  require(backend == "oracle" || backend == "adapter", ErrorCode::bad_config,
          "config: backend must be oracle or adapter");
  require(ablation == "glue" || ablation == "glue-s", ErrorCode::bad_config,
          "config: ablation must be glue or glue-s");
  require(max_steps >= 1, ErrorCode::bad_config, "config: max_steps >= 1");
  require(eval_in_domain >= 1 && eval_ood >= 0, ErrorCode::bad_config,
          "config: eval episode counts");
}

uint64_t RunConfig::hash() const { return fnv1a64(to_json().dump()); }

std::string RunConfig::hash_hex() const { return to_hex64(hash()); }

std::string RunConfig::preprocess_hash_hex() const {
  nlohmann::json j{{"task", task},
                   {"seed", seed},
                   {"n_cluster", n_cluster},
                   {"n_grid", n_grid},
                   {"kmeans_restarts", kmeans_restarts},
                   {"sem_pe_scale", sem_pe_scale},
                   {"tau", tau},
                   {"enc_patch", enc_patch},
                   {"enc_pe_scale", enc_pe_scale},
                   {"backend", backend}};
  return to_hex64(fnv1a64(j.dump()));
}

std::string RunConfig::resolved_data_root() const {
  if (!data_root.empty()) return data_root;
  if (const char* env_root = std::getenv("GLUE_DATA_ROOT")) return env_root;
  return ".";
}

}  // namespace glue::pipeline
