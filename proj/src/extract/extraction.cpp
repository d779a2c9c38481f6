#include "glue/extract/extraction.hpp"

#include <algorithm>
#include <sstream>

namespace glue::extract {

std::vector<Mask> generate_masks(const Frame& frame, const std::vector<TextQuery>& queries,
                                 const perception::DetectorBackend& detector,
                                 const perception::SegmenterBackend& segmenter, int frame_index) {
  const std::vector<BoundingBox> boxes = detector.detect(frame, queries, frame_index);
  std::vector<BoxPrompt> prompts;
  prompts.reserve(boxes.size());
  for (size_t i = 0; i < boxes.size(); ++i) prompts.push_back({boxes[i], queries[i].object_id});
  return segmenter.segment(frame, prompts, frame_index);
}

std::vector<Keypoint> select_keypoints(const PixelFeatureMap& map, const std::vector<Mask>& masks,
                                       int n_cluster, uint64_t seed,
                                       const KMeansConfig& kmeans_cfg) {
  require(n_cluster >= 1, ErrorCode::invalid_argument, "select_keypoints: n_cluster >= 1");
  std::vector<Keypoint> out;
  for (size_t mi = 0; mi < masks.size(); ++mi) {
    const Mask& mask = masks[mi];
    require(mask.bitmap.height == map.height && mask.bitmap.width == map.width,
            ErrorCode::dimension_mismatch, "select_keypoints: mask/frame size mismatch");

    std::vector<std::pair<int, int>> pixels;  // row-major: lexicographic (row, col)
    for (int r = 0; r < mask.bitmap.height; ++r)
      for (int c = 0; c < mask.bitmap.width; ++c)
        if (mask.bitmap.at(r, c)) pixels.push_back({r, c});
    if (static_cast<int>(pixels.size()) < n_cluster)
      raise(ErrorCode::mask_too_small, "mask '" + mask.object_id + "' has " +
                                           std::to_string(pixels.size()) + " pixels < " +
                                           std::to_string(n_cluster) + " clusters");

    const nn::MatD features = map.gather(pixels);
    const uint64_t mask_seed = derive_seed(seed, "kmeans", mi);
    const KMeansResult km = kmeans(features, n_cluster, mask_seed, kmeans_cfg);
    const std::vector<int> picks = select_nearest_per_cluster(features, km.centers, pixels);

    // canonical cluster order: by selected pixel, stable for duplicates
    std::vector<int> order(picks.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pixels[picks[a]] < pixels[picks[b]]; });
    for (size_t rank = 0; rank < order.size(); ++rank) {
      const auto& px = pixels[picks[order[rank]]];
      Keypoint kp;
      kp.row = px.first;
      kp.col = px.second;
      kp.object_id = mask.object_id;
      kp.cluster_index = static_cast<int>(rank);
      out.push_back(kp);
    }
  }
  return out;
}

std::vector<Keypoint> extract_initial_keypoints(const Frame& frame,
                                                const std::vector<TextQuery>& queries,
                                                const perception::DetectorBackend& detector,
                                                const perception::SegmenterBackend& segmenter,
                                                const perception::PatchEncoderBackend& encoder,
                                                const ExtractionConfig& config) {
  const std::vector<Mask> masks = generate_masks(frame, queries, detector, segmenter);
  const PixelFeatureMap map = build_pixel_feature_map(frame, encoder, config.n_grid);
  std::vector<Keypoint> keypoints =
      select_keypoints(map, masks, config.n_cluster, config.seed, config.kmeans);
  std::sort(keypoints.begin(), keypoints.end(), [](const Keypoint& a, const Keypoint& b) {
    return std::tie(a.object_id, a.cluster_index) < std::tie(b.object_id, b.cluster_index);
  });
  return keypoints;
}

std::string extraction_record_text(const std::vector<TextQuery>& queries,
                                   const std::vector<Mask>& masks,
                                   const std::vector<Keypoint>& keypoints, uint64_t seed,
                                   const std::string& config_hash) {
  std::ostringstream out;
  out << "glue-extraction/1\n";
  out << "seed " << seed << "\n";
  out << "config_hash " << config_hash << "\n";
  for (const auto& q : queries) out << "query " << q.object_id << " " << q.text << "\n";
  for (const auto& m : masks)
    out << "mask " << m.object_id << " " << RleBitmap::encode(m.bitmap).to_text() << "\n";
  for (const auto& kp : keypoints)
    out << "keypoint " << kp.row << " " << kp.col << " " << kp.object_id << " "
        << kp.cluster_index << "\n";
  return out.str();
}

ExtractionRecord parse_extraction_record(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(std::getline(in, line) && line == "glue-extraction/1", ErrorCode::io_error,
          "extraction record: bad header");
  ExtractionRecord rec;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string verb;
    ls >> verb;
    if (verb == "seed") {
      ls >> rec.seed;
    } else if (verb == "config_hash") {
      ls >> rec.config_hash;
    } else if (verb == "query") {
      TextQuery q;
      ls >> q.object_id;
      std::getline(ls, q.text);
      if (!q.text.empty() && q.text.front() == ' ') q.text.erase(0, 1);
      rec.queries.push_back(q);
    } else if (verb == "mask") {
      std::string id, rest;
      ls >> id;
      std::getline(ls, rest);
      rec.masks.push_back({id, RleBitmap::from_text(rest)});
    } else if (verb == "keypoint") {
      Keypoint kp;
      ls >> kp.row >> kp.col >> kp.object_id >> kp.cluster_index;
      rec.keypoints.push_back(kp);
    } else {
      raise(ErrorCode::io_error, "extraction record: unknown line '" + line + "'");
    }
    require(!ls.fail(), ErrorCode::io_error, "extraction record: bad line '" + line + "'");
  }
  return rec;
}

}  // namespace glue::extract
