// Command-line front end for the GLUE runtime; talks to the shared library
// through the C API only.
#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "glue/c_api.h"

namespace {

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string seed, task, ablation, n_cluster, episodes, epochs;
};

void add_config_options(CLI::App* cmd, ConfigArgs* args) {
  cmd->add_option("--config", args->config_path, "config file (JSON)");
  cmd->add_option("--set", args->overrides, "override any config key (key=value)");
  cmd->add_option("--seed", args->seed, "run seed");
  cmd->add_option("--task", args->task,
                  "task: push-button | stack-block | place-object | fold-proxy");
  cmd->add_option("--ablation", args->ablation, "ablation mode: glue | glue-s");
  cmd->add_option("--n-cluster", args->n_cluster, "keypoints per object");
  cmd->add_option("--episodes", args->episodes, "demo episode count");
  cmd->add_option("--epochs", args->epochs, "training epochs");
}

[[noreturn]] void die(const std::string& where) {
  std::fprintf(stderr, "{\"error\": \"%s\", \"detail\": \"%s\"}\n", where.c_str(),
               glue_last_error());
  std::exit(1);
}

glue_config* build_config(const ConfigArgs& args) {
  glue_config* cfg =
      args.config_path.empty() ? glue_config_default() : glue_config_load(args.config_path.c_str());
  if (!cfg) die("config");
  auto apply = [&](const char* key, const std::string& value) {
    if (value.empty()) return;
    if (glue_config_set(cfg, key, value.c_str()) != GLUE_OK) die("config");
  };
  apply("seed", args.seed);
  apply("task", args.task);
  apply("ablation", args.ablation);
  apply("n_cluster", args.n_cluster);
  apply("episodes", args.episodes);
  apply("epochs", args.epochs);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "{\"error\": \"config\", \"detail\": \"--set expects key=value\"}\n");
      std::exit(1);
    }
    if (glue_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()) != GLUE_OK)
      die("config");
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLUE: global-local unified encoding for imitation learning"};
  app.require_subcommand(1);

  ConfigArgs gen_args, train_args, eval_args;
  std::string out_dir, dataset_dir, checkpoint, out_path;
  std::string episode_dir, track_log, extraction_record;
  std::vector<std::string> report_paths;
  std::string report_text_out, report_json_out;

  CLI::App* gen = app.add_subcommand("gen-demos", "generate expert demonstration episodes");
  add_config_options(gen, &gen_args);
  gen->add_option("--out", out_dir, "output dataset directory")->required();

  CLI::App* train = app.add_subcommand("train", "train a policy on a demo dataset");
  add_config_options(train, &train_args);
  train->add_option("--dataset", dataset_dir, "dataset directory")->required();
  train->add_option("--out", out_dir, "output directory for checkpoints and logs")->required();

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint (in-domain + OOD)");
  add_config_options(eval, &eval_args);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  eval->add_option("--out", out_path, "output report path (JSON)")->required();

  CLI::App* vis = app.add_subcommand("visualize", "emit keypoint/grid overlay frames");
  vis->add_option("--episode", episode_dir, "episode directory")->required();
  vis->add_option("--track-log", track_log, "track log file")->required();
  vis->add_option("--extraction", extraction_record, "extraction record (for object colors)");
  vis->add_option("--out", out_dir, "output directory")->required();

  CLI::App* report = app.add_subcommand("report", "render a comparison table from eval reports");
  report->add_option("reports", report_paths, "eval report JSON files")->required();
  report->add_option("--out-text", report_text_out, "write the plain-text table here");
  report->add_option("--out-json", report_json_out, "write the machine-readable table here");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    glue_config* cfg = build_config(gen_args);
    int n = 0;
    if (glue_gen_demos(cfg, out_dir.c_str(), &n) != GLUE_OK) die("gen-demos");
    std::printf("wrote %d episodes to %s\n", n, out_dir.c_str());
    glue_config_free(cfg);
  } else if (train->parsed()) {
    glue_config* cfg = build_config(train_args);
    if (glue_train(cfg, dataset_dir.c_str(), out_dir.c_str()) != GLUE_OK) die("train");
    std::printf("checkpoint written to %s\n", out_dir.c_str());
    glue_config_free(cfg);
  } else if (eval->parsed()) {
    glue_config* cfg = build_config(eval_args);
    if (glue_eval(cfg, checkpoint.c_str(), out_path.c_str()) != GLUE_OK) die("eval");
    std::printf("report written to %s\n", out_path.c_str());
    glue_config_free(cfg);
  } else if (vis->parsed()) {
    int frames = 0;
    if (glue_visualize(episode_dir.c_str(), track_log.c_str(),
                       extraction_record.empty() ? nullptr : extraction_record.c_str(),
                       out_dir.c_str(), &frames) != GLUE_OK)
      die("visualize");
    std::printf("wrote %d overlay frames to %s\n", frames, out_dir.c_str());
  } else if (report->parsed()) {
    std::vector<const char*> paths;
    for (const auto& p : report_paths) paths.push_back(p.c_str());
    char* text = nullptr;
    char* json = nullptr;
    if (glue_report_render(paths.data(), paths.size(), &text, &json) != GLUE_OK) die("report");
    std::printf("%s", text);
    if (!report_text_out.empty()) {
      FILE* f = std::fopen(report_text_out.c_str(), "w");
      if (f) {
        std::fputs(text, f);
        std::fclose(f);
      }
    }
    if (!report_json_out.empty()) {
      FILE* f = std::fopen(report_json_out.c_str(), "w");
      if (f) {
        std::fputs(json, f);
        std::fclose(f);
      }
    }
    glue_string_free(text);
    glue_string_free(json);
  }
  return 0;
}
