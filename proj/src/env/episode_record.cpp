#include "glue/env/episode_record.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "glue/core/io_util.hpp"
#include "glue/core/png_io.hpp"

namespace glue::env {

EpisodeRecord run_expert_episode(Task task, uint64_t seed, PerturbKind kind, uint64_t perturb_seed,
                                 const Environment::Params& params) {
  Environment env(params);
  Scene scene = make_scene(task, seed);
  if (kind != PerturbKind::none) scene = apply_perturbation(scene, kind, perturb_seed);

  EpisodeRecord rec;
  rec.task = task;
  rec.seed = seed;
  rec.perturbation = kind;
  rec.perturb_seed = perturb_seed;
  rec.queries = task_queries(task);
  for (const auto& obj : scene.objects)
    if (obj.task_relevant) rec.labels.push_back({obj.id, obj.label});

  Frame frame = env.begin(scene);
  rec.frames.push_back(std::move(frame));
  rec.states.push_back(env.state7());

  while (!env.done()) {
    const auto action = env.expert_action();
    rec.actions.push_back({static_cast<float>(action[0]), static_cast<float>(action[1]),
                           static_cast<float>(action[2])});
    StepResult result = env.step(action);
    rec.frames.push_back(std::move(result.frame));
    rec.states.push_back(env.state7());
    if (result.done) rec.success = result.success;
  }
  rec.actions.push_back({0.f, 0.f, 0.f});  // terminal no-op keeps sequences equal length
  rec.gt = env.ground_truth_history();
  return rec;
}

namespace {

void write_gt(std::ostream& out, const std::vector<FrameGroundTruth>& gt) {
  out.write("GLUEGT01", 8);
  write_pod<uint32_t>(out, static_cast<uint32_t>(gt.size()));
  for (const auto& fgt : gt) {
    write_pod<int32_t>(out, fgt.frame_index);
    write_pod<uint32_t>(out, static_cast<uint32_t>(fgt.objects.size()));
    for (const auto& o : fgt.objects) {
      write_string(out, o.object_id);
      write_pod<double>(out, o.motion_dr);
      write_pod<double>(out, o.motion_dc);
      write_pod<uint64_t>(out, o.amodal_count);
      write_pod<uint64_t>(out, o.visible_count);
      write_pod<int32_t>(out, o.bbox_row_min);
      write_pod<int32_t>(out, o.bbox_col_min);
      write_pod<int32_t>(out, o.bbox_row_max);
      write_pod<int32_t>(out, o.bbox_col_max);
      for (const RleBitmap* bm : {&o.amodal, &o.occlusion}) {
        write_pod<int32_t>(out, bm->height);
        write_pod<int32_t>(out, bm->width);
        write_vec<uint32_t>(out, bm->runs);
      }
    }
  }
}

std::vector<FrameGroundTruth> read_gt(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::string(magic, 8) == "GLUEGT01", ErrorCode::io_error,
          "gt.bin: bad magic");
  const uint32_t n_frames = read_pod<uint32_t>(in);
  std::vector<FrameGroundTruth> gt(n_frames);
  for (auto& fgt : gt) {
    fgt.frame_index = read_pod<int32_t>(in);
    const uint32_t n_obj = read_pod<uint32_t>(in);
    fgt.objects.resize(n_obj);
    for (auto& o : fgt.objects) {
      o.object_id = read_string(in);
      o.motion_dr = read_pod<double>(in);
      o.motion_dc = read_pod<double>(in);
      o.amodal_count = read_pod<uint64_t>(in);
      o.visible_count = read_pod<uint64_t>(in);
      o.bbox_row_min = read_pod<int32_t>(in);
      o.bbox_col_min = read_pod<int32_t>(in);
      o.bbox_row_max = read_pod<int32_t>(in);
      o.bbox_col_max = read_pod<int32_t>(in);
      for (RleBitmap* bm : {&o.amodal, &o.occlusion}) {
        bm->height = read_pod<int32_t>(in);
        bm->width = read_pod<int32_t>(in);
        bm->runs = read_vec<uint32_t>(in);
      }
    }
  }
  return gt;
}

template <size_t N>
void write_table(const std::string& path, const std::vector<std::array<float, N>>& rows) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_error, "cannot open " + path);
  out.write("GLUETB01", 8);
  write_pod<uint32_t>(out, static_cast<uint32_t>(rows.size()));
  write_pod<uint32_t>(out, static_cast<uint32_t>(N));
  for (const auto& row : rows)
    out.write(reinterpret_cast<const char*>(row.data()), sizeof(float) * N);
  require(out.good(), ErrorCode::io_error, "write failed: " + path);
}

template <size_t N>
std::vector<std::array<float, N>> read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_error, "cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::string(magic, 8) == "GLUETB01", ErrorCode::io_error,
          path + ": bad magic");
  const uint32_t n = read_pod<uint32_t>(in);
  const uint32_t cols = read_pod<uint32_t>(in);
  require(cols == N, ErrorCode::io_error, path + ": column mismatch");
  std::vector<std::array<float, N>> rows(n);
  for (auto& row : rows) {
    in.read(reinterpret_cast<char*>(row.data()), sizeof(float) * N);
  }
  require(!in.fail(), ErrorCode::io_error, path + ": truncated");
  return rows;
}

std::string frame_path(const std::string& dir, int index_1based) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.png", index_1based);
  return dir + "/frames/" + buf;
}

}  // namespace

void save_episode(const std::string& dir, const EpisodeRecord& record) {
  ensure_dir(dir);
  ensure_dir(dir + "/frames");

  nlohmann::json manifest;
  manifest["format"] = "glue-episode/1";
  manifest["task"] = task_name(record.task);
  manifest["seed"] = record.seed;
  manifest["perturbation"] = perturb_name(record.perturbation);
  manifest["perturb_seed"] = record.perturb_seed;
  manifest["success"] = record.success;
  manifest["length"] = record.length();
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : record.queries)
    queries.push_back({{"text", q.text}, {"object_id", q.object_id}});
  manifest["queries"] = queries;
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& [id, label] : record.labels)
    labels.push_back({{"object_id", id}, {"label", label}});
  manifest["objects"] = labels;
  write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");

  for (int i = 0; i < record.length(); ++i) write_png(frame_path(dir, i + 1), record.frames[i]);
  write_table<7>(dir + "/states.bin", record.states);
  write_table<3>(dir + "/actions.bin", record.actions);
  std::ofstream gt_out(dir + "/gt.bin", std::ios::binary);
  require(gt_out.good(), ErrorCode::io_error, "cannot open " + dir + "/gt.bin");
  write_gt(gt_out, record.gt);
  require(gt_out.good(), ErrorCode::io_error, "write failed: " + dir + "/gt.bin");
}

EpisodeRecord load_episode(const std::string& dir, bool load_frames) {
  EpisodeRecord rec;
  const nlohmann::json manifest = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
  require(manifest.value("format", "") == "glue-episode/1", ErrorCode::io_error,
          dir + ": not an episode directory");
  rec.task = task_from_name(manifest.at("task"));
  rec.seed = manifest.at("seed");
  rec.perturbation = perturb_from_name(manifest.at("perturbation"));
  rec.perturb_seed = manifest.at("perturb_seed");
  rec.success = manifest.at("success");
  for (const auto& q : manifest.at("queries"))
    rec.queries.push_back({q.at("text"), q.at("object_id")});
  for (const auto& o : manifest.at("objects"))
    rec.labels.push_back({o.at("object_id"), o.at("label")});

  const int length = manifest.at("length");
  if (load_frames) {
    rec.frames.reserve(length);
    for (int i = 0; i < length; ++i) rec.frames.push_back(read_png(frame_path(dir, i + 1)));
  }
  rec.states = read_table<7>(dir + "/states.bin");
  rec.actions = read_table<3>(dir + "/actions.bin");
  std::ifstream gt_in(dir + "/gt.bin", std::ios::binary);
  require(gt_in.good(), ErrorCode::io_error, "cannot open " + dir + "/gt.bin");
  rec.gt = read_gt(gt_in);
  require(static_cast<int>(rec.states.size()) == length &&
              static_cast<int>(rec.actions.size()) == length &&
              static_cast<int>(rec.gt.size()) == length,
          ErrorCode::io_error, dir + ": sequence length mismatch");
  return rec;
}

}  // namespace glue::env
