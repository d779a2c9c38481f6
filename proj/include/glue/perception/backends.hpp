#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>

#include "glue/core/image.hpp"
#include "glue/env/scene.hpp"
#include "glue/nn/tensor.hpp"
#include "glue/types.hpp"

namespace glue::perception {

// Low-resolution patch-wise feature map from a vision encoder.
struct PatchEncoderOutput {
  nn::MatD patch_features;  // (grid*grid x dim), row-major grid flattening
  std::optional<nn::VecD> cls_token;
  int grid = 0;
  int dim = 0;
};

// A frame paired with its 1-based episode index; oracle backends key their
// ground-truth lookups on the index, adapters serialize it on the wire.
struct IndexedFrame {
  const Frame* frame = nullptr;
  int frame_index = 1;
};

// Renderer ground truth consumed by oracle backends, either live from an
// Environment or replayed from a stored EpisodeRecord.
class GroundTruthSource {
 public:
  virtual ~GroundTruthSource() = default;
  virtual const env::FrameGroundTruth& frame(int frame_index) const = 0;
  virtual int frame_count() const = 0;
  virtual int frame_size() const = 0;
  // (object_id, label) pairs for query matching.
  virtual std::vector<std::pair<std::string, std::string>> object_labels() const = 0;
};

class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;

  // One slot per query; nullopt when the query resolved to nothing.
  virtual std::vector<std::optional<BoundingBox>> try_detect(
      const Frame& frame, const std::vector<TextQuery>& queries, int frame_index) const = 0;

  // Throws UnresolvedQuery naming the offending query.
  std::vector<BoundingBox> detect(const Frame& frame, const std::vector<TextQuery>& queries,
                                  int frame_index = 1) const;
};

class SegmenterBackend {
 public:
  virtual ~SegmenterBackend() = default;

  // One mask per prompt, in prompt order. Throws EmptyMask.
  virtual std::vector<Mask> segment(const Frame& frame, const std::vector<BoxPrompt>& prompts,
                                    int frame_index = 1) const = 0;
};

class PatchEncoderBackend {
 public:
  virtual ~PatchEncoderBackend() = default;
  virtual int native_resolution() const = 0;
  virtual int grid_size() const = 0;
  virtual int feature_dim() const = 0;
  virtual bool has_cls() const = 0;

  // Input must already be at the native resolution (ResolutionMismatch
  // otherwise). Deterministic: same input, bit-identical output.
  virtual PatchEncoderOutput encode(const FloatImage& image) const = 0;
};

class TrackerBackend {
 public:
  virtual ~TrackerBackend() = default;

  // Returns one state per initial point at the final frame of `frames`;
  // initial points are given in first-frame coordinates. Raw visibility in
  // [0,1]. Throws TrackerFailure.
  virtual std::vector<KeypointState> track(const std::vector<IndexedFrame>& frames,
                                           const std::vector<KeypointState>& initial) const = 0;
};

// Eq.-style convenience: track across an ordered frame sequence (indexed
// 1..T) and return final-frame states.
std::vector<KeypointState> track_points(const TrackerBackend& backend,
                                        const std::vector<Frame>& frames,
                                        const std::vector<KeypointState>& initial_points);

}  // namespace glue::perception
