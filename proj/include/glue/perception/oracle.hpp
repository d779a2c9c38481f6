#pragma once

#include "glue/perception/backends.hpp"

namespace glue::env {
class Environment;
struct EpisodeRecord;
}  // namespace glue::env

namespace glue::perception {

// Ground truth served live from an environment instance.
class EnvGroundTruth : public GroundTruthSource {
 public:
  explicit EnvGroundTruth(const env::Environment& environment) : env_(&environment) {}
  const env::FrameGroundTruth& frame(int frame_index) const override;
  int frame_count() const override;
  int frame_size() const override;
  std::vector<std::pair<std::string, std::string>> object_labels() const override;

 private:
  const env::Environment* env_;
};

// Ground truth replayed from a stored episode.
class RecordGroundTruth : public GroundTruthSource {
 public:
  explicit RecordGroundTruth(const env::EpisodeRecord& record) : rec_(&record) {}
  const env::FrameGroundTruth& frame(int frame_index) const override;
  int frame_count() const override;
  int frame_size() const override;
  std::vector<std::pair<std::string, std::string>> object_labels() const override;

 private:
  const env::EpisodeRecord* rec_;
};

// Text-guided box generation against renderer ground truth. A query matches
// an object when every query token appears in the object label; among
// matches the winner has highest confidence (visible fraction), ties broken
// by smallest (row_min, col_min).
class OracleDetector : public DetectorBackend {
 public:
  explicit OracleDetector(const GroundTruthSource& gt) : gt_(&gt) {}
  std::vector<std::optional<BoundingBox>> try_detect(const Frame& frame,
                                                     const std::vector<TextQuery>& queries,
                                                     int frame_index) const override;

 private:
  const GroundTruthSource* gt_;
};

// Emits the prompted object's visible pixels restricted to the prompt box.
class OracleSegmenter : public SegmenterBackend {
 public:
  explicit OracleSegmenter(const GroundTruthSource& gt) : gt_(&gt) {}
  std::vector<Mask> segment(const Frame& frame, const std::vector<BoxPrompt>& prompts,
                            int frame_index) const override;

 private:
  const GroundTruthSource* gt_;
};

// Propagates first-frame points by the owning object's accumulated rigid
// motion; visibility is 0 iff the point is out of frame or its rounded pixel
// lies in the owner's occlusion bitmap. Ignores frame pixels entirely.
class OracleTracker : public TrackerBackend {
 public:
  explicit OracleTracker(const GroundTruthSource& gt) : gt_(&gt) {}
  std::vector<KeypointState> track(const std::vector<IndexedFrame>& frames,
                                   const std::vector<KeypointState>& initial) const override;

 private:
  const GroundTruthSource* gt_;
};

}  // namespace glue::perception
