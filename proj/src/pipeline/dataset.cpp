#include "glue/pipeline/dataset.hpp"

#include <cstdio>
#include <fstream>

#include "glue/core/io_util.hpp"
#include "glue/extract/extraction.hpp"
#include "glue/perception/oracle.hpp"
#include "glue/track/session.hpp"

namespace glue::pipeline {

namespace {

std::string episode_dir_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ep_%06d", index);
  return buf;
}

}  // namespace

int generate_demos(const RunConfig& config, const std::string& out_dir) {
  const env::Task task = env::task_from_name(config.task);
  ensure_dir(out_dir);
  env::Environment::Params params;
  params.max_steps = config.max_steps;

  nlohmann::json episodes = nlohmann::json::array();
  for (int i = 0; i < config.episodes; ++i) {
    bool kept = false;
    for (int attempt = 0; attempt < config.demo_retries && !kept; ++attempt) {
      const uint64_t ep_seed =
          derive_seed(config.seed, "demo", static_cast<uint64_t>(i) * 1000 + attempt);
      env::EpisodeRecord rec =
          env::run_expert_episode(task, ep_seed, env::PerturbKind::none, 0, params);
      if (!rec.success) continue;
      const std::string dir = out_dir + "/" + episode_dir_name(i);
      env::save_episode(dir, rec);
      episodes.push_back({{"dir", episode_dir_name(i)},
                          {"seed", ep_seed},
                          {"success", true},
                          {"length", rec.length()}});
      kept = true;
    }
    require(kept, ErrorCode::expert_failure,
            "demo " + std::to_string(i) + ": expert failed " +
                std::to_string(config.demo_retries) + " seeds in a row");
  }

  nlohmann::json manifest;
  manifest["format"] = "glue-dataset/1";
  manifest["task"] = config.task;
  manifest["seed"] = config.seed;
  manifest["config"] = config.to_json();
  manifest["config_hash"] = config.hash_hex();
  manifest["episodes"] = episodes;
  write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return static_cast<int>(episodes.size());
}

DatasetIndex load_dataset_index(const std::string& dataset_dir) {
  const nlohmann::json manifest =
      nlohmann::json::parse(read_text_file(dataset_dir + "/manifest.json"));
  require(manifest.value("format", "") == "glue-dataset/1", ErrorCode::io_error,
          dataset_dir + ": not a dataset directory");
  DatasetIndex index;
  index.dir = dataset_dir;
  index.task = manifest.at("task");
  index.seed = manifest.at("seed");
  for (const auto& ep : manifest.at("episodes"))
    index.episode_dirs.push_back(dataset_dir + "/" + ep.at("dir").get<std::string>());
  return index;
}

EpisodeFeatures preprocess_episode(const RunConfig& config, const env::EpisodeRecord& record,
                                   const encoder::GlueEncoder<float>& enc) {
  EpisodeFeatures out;
  out.actions = record.actions;
  const int T = record.length();
  require(T >= 1 && !record.frames.empty(), ErrorCode::invalid_argument,
          "preprocess: record has no frames");

  const perception::RecordGroundTruth gt(record);
  const perception::OracleDetector detector(gt);
  const perception::OracleSegmenter segmenter(gt);
  const perception::OracleTracker tracker(gt);
  perception::ToyVitConfig sem_cfg{14, config.enc_patch, 768, config.sem_pe_scale, false};
  const perception::ToyPatchEncoderBackend sem_encoder(
      sem_cfg, derive_seed(config.seed, "init.encoder_semantic"));

  extract::ExtractionConfig ext_cfg;
  ext_cfg.n_cluster = config.n_cluster;
  ext_cfg.n_grid = config.n_grid;
  ext_cfg.seed = derive_seed(record.seed, "extract");
  ext_cfg.kmeans.restarts = config.kmeans_restarts;

  out.keypoints = extract::extract_initial_keypoints(record.frames[0], record.queries, detector,
                                                     segmenter, sem_encoder, ext_cfg);

  track::TrackerSession session(out.keypoints, record.frames[0]);
  const int native = enc.global_encoder().native_resolution();

  out.frames.resize(T);
  for (int t = 0; t < T; ++t) {
    if (t > 0) session.advance(record.frames[t], tracker);
    const auto thresholded = track::threshold_visibility(session.current_states(), config.tau);
    const auto patches =
        encoder::locate_key_patches(thresholded, record.frames[t].height, record.frames[t].width);

    FrameFeatures& ff = out.frames[t];
    ff.state = record.states[t];
    ff.key_patches.reserve(patches.size());
    for (const auto& p : patches) ff.key_patches.push_back({p.x, p.y, p.visible});

    const auto map = encoder::build_local_grid_map<float>(record.frames[t], enc.local_encoder());
    ff.local_key_features = encoder::gather_local_features<float>(map, patches);

    const FloatImage at_native =
        resize_area(to_float(record.frames[t]), native, native);
    ff.global_patch_rows = enc.global_encoder().patchify(at_native);
  }
  return out;
}

namespace {

void write_matf(std::ostream& out, const nn::MatF& m) {
  write_pod<uint32_t>(out, static_cast<uint32_t>(m.rows()));
  write_pod<uint32_t>(out, static_cast<uint32_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * m.size()));
}

nn::MatF read_matf(std::istream& in) {
  const uint32_t rows = read_pod<uint32_t>(in);
  const uint32_t cols = read_pod<uint32_t>(in);
  nn::MatF m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(float) * m.size()));
  require(!in.fail(), ErrorCode::io_error, "cache: truncated matrix");
  return m;
}

}  // namespace

void save_episode_features(const std::string& path, const EpisodeFeatures& feats) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_error, "cannot open " + path);
  out.write("GLUEPP01", 8);
  write_pod<uint8_t>(out, feats.quarantined ? 1 : 0);
  write_string(out, feats.quarantine_reason);
  write_pod<uint32_t>(out, static_cast<uint32_t>(feats.keypoints.size()));
  for (const auto& kp : feats.keypoints) {
    write_pod<int32_t>(out, kp.row);
    write_pod<int32_t>(out, kp.col);
    write_string(out, kp.object_id);
    write_pod<int32_t>(out, kp.cluster_index);
  }
  write_pod<uint32_t>(out, static_cast<uint32_t>(feats.frames.size()));
  for (const auto& ff : feats.frames) {
    write_matf(out, ff.global_patch_rows);
    write_matf(out, ff.local_key_features);
    write_pod<uint32_t>(out, static_cast<uint32_t>(ff.key_patches.size()));
    for (const auto& p : ff.key_patches) {
      write_pod<int32_t>(out, p[0]);
      write_pod<int32_t>(out, p[1]);
      write_pod<int32_t>(out, p[2]);
    }
    out.write(reinterpret_cast<const char*>(ff.state.data()), sizeof(float) * 7);
  }
  write_pod<uint32_t>(out, static_cast<uint32_t>(feats.actions.size()));
  for (const auto& a : feats.actions)
    out.write(reinterpret_cast<const char*>(a.data()), sizeof(float) * 3);
  require(out.good(), ErrorCode::io_error, "write failed: " + path);
}

EpisodeFeatures load_episode_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_error, "cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::string(magic, 8) == "GLUEPP01", ErrorCode::io_error,
          path + ": bad magic");
  EpisodeFeatures feats;
  feats.quarantined = read_pod<uint8_t>(in) != 0;
  feats.quarantine_reason = read_string(in);
  const uint32_t n_kp = read_pod<uint32_t>(in);
  feats.keypoints.resize(n_kp);
  for (auto& kp : feats.keypoints) {
    kp.row = read_pod<int32_t>(in);
    kp.col = read_pod<int32_t>(in);
    kp.object_id = read_string(in);
    kp.cluster_index = read_pod<int32_t>(in);
  }
  const uint32_t n_frames = read_pod<uint32_t>(in);
  feats.frames.resize(n_frames);
  for (auto& ff : feats.frames) {
    ff.global_patch_rows = read_matf(in);
    ff.local_key_features = read_matf(in);
    const uint32_t n_patches = read_pod<uint32_t>(in);
    ff.key_patches.resize(n_patches);
    for (auto& p : ff.key_patches) {
      p[0] = read_pod<int32_t>(in);
      p[1] = read_pod<int32_t>(in);
      p[2] = read_pod<int32_t>(in);
    }
    in.read(reinterpret_cast<char*>(ff.state.data()), sizeof(float) * 7);
  }
  const uint32_t n_actions = read_pod<uint32_t>(in);
  feats.actions.resize(n_actions);
  for (auto& a : feats.actions) in.read(reinterpret_cast<char*>(a.data()), sizeof(float) * 3);
  require(!in.fail(), ErrorCode::io_error, path + ": truncated");
  return feats;
}

std::vector<EpisodeFeatures> load_or_build_cache(const RunConfig& config,
                                                 const DatasetIndex& index,
                                                 const encoder::GlueEncoder<float>& enc) {
  const std::string cache_dir = index.dir + "/cache/" + config.preprocess_hash_hex();
  ensure_dir(cache_dir);
  std::vector<EpisodeFeatures> out(index.episode_dirs.size());
  for (size_t i = 0; i < index.episode_dirs.size(); ++i) {
    const std::string base = cache_dir + "/" + episode_dir_name(static_cast<int>(i));
    const std::string bin_path = base + ".bin";
    if (std::filesystem::exists(bin_path)) {
      out[i] = load_episode_features(bin_path);
      continue;
    }
    const env::EpisodeRecord record = env::load_episode(index.episode_dirs[i], true);
    EpisodeFeatures feats;
    try {
      feats = preprocess_episode(config, record, enc);
    } catch (const GlueError& e) {
      feats.quarantined = true;
      feats.quarantine_reason = e.what();
      feats.actions = record.actions;
    }
    if (!feats.quarantined) {
      // external-interface text records: extraction result and track log
      const perception::RecordGroundTruth gt(record);
      const perception::OracleDetector detector(gt);
      const perception::OracleSegmenter segmenter(gt);
      const auto masks = extract::generate_masks(record.frames[0], record.queries, detector,
                                                 segmenter);
      write_text_file(base + ".extraction.txt",
                      extract::extraction_record_text(record.queries, masks, feats.keypoints,
                                                      derive_seed(record.seed, "extract"),
                                                      config.preprocess_hash_hex()));
      const perception::OracleTracker tracker(gt);
      track::TrackerSession session(feats.keypoints, record.frames[0]);
      std::string log = track::track_log_header(static_cast<int>(feats.keypoints.size()));
      for (int t = 0; t < record.length(); ++t) {
        if (t > 0) session.advance(record.frames[t], tracker);
        const auto thresholded =
            track::threshold_visibility(session.current_states(), config.tau);
        for (size_t p = 0; p < thresholded.size(); ++p)
          log += track::track_log_line(t + 1, static_cast<int>(p), session.current_states()[p],
                                       thresholded[p].visibility >= 0.5 ? 1 : 0);
      }
      write_text_file(base + ".track.txt", log);
    } else {
      write_text_file(base + ".quarantine.txt", feats.quarantine_reason + "\n");
    }
    save_episode_features(bin_path, feats);
    out[i] = load_episode_features(bin_path);  // read back: cache is the source of truth
  }
  return out;
}

}  // namespace glue::pipeline
