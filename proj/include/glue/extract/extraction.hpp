#pragma once

#include "glue/extract/feature_map.hpp"
#include "glue/extract/kmeans.hpp"

namespace glue::extract {

struct ExtractionConfig {
  int n_cluster = 15;  // per object
  int n_grid = 4;
  uint64_t seed = 0;
  KMeansConfig kmeans;
};

// Seg(I1, Det(I1, {c_i})): masks in query order; errors carry the offending
// query.
std::vector<Mask> generate_masks(const Frame& frame, const std::vector<TextQuery>& queries,
                                 const perception::DetectorBackend& detector,
                                 const perception::SegmenterBackend& segmenter,
                                 int frame_index = 1);

// Per mask: K-means over the mask's pixel features, then per cluster the
// mask pixel nearest the cluster center (distance ties: lexicographically
// smallest (row, col)). Clusters are relabelled by their selected pixel so
// cluster_index is deterministic. Throws MaskTooSmall.
std::vector<Keypoint> select_keypoints(const PixelFeatureMap& map, const std::vector<Mask>& masks,
                                       int n_cluster, uint64_t seed,
                                       const KMeansConfig& kmeans_cfg = {});

// Full one-time pipeline; output sorted by (object_id, cluster_index).
std::vector<Keypoint> extract_initial_keypoints(const Frame& frame,
                                                const std::vector<TextQuery>& queries,
                                                const perception::DetectorBackend& detector,
                                                const perception::SegmenterBackend& segmenter,
                                                const perception::PatchEncoderBackend& encoder,
                                                const ExtractionConfig& config);

// Structured text record persisted per episode: query list, mask RLEs,
// keypoints, seed, config hash.
std::string extraction_record_text(const std::vector<TextQuery>& queries,
                                   const std::vector<Mask>& masks,
                                   const std::vector<Keypoint>& keypoints, uint64_t seed,
                                   const std::string& config_hash);

struct ExtractionRecord {
  std::vector<TextQuery> queries;
  std::vector<std::pair<std::string, RleBitmap>> masks;  // (object_id, rle)
  std::vector<Keypoint> keypoints;
  uint64_t seed = 0;
  std::string config_hash;
};
ExtractionRecord parse_extraction_record(const std::string& text);

}  // namespace glue::extract
