#include "glue/perception/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glue/env/episode_record.hpp"

namespace glue::perception {

std::vector<BoundingBox> DetectorBackend::detect(const Frame& frame,
                                                 const std::vector<TextQuery>& queries,
                                                 int frame_index) const {
  require(frame.valid(), ErrorCode::invalid_argument, "detect: invalid frame");
  require(!queries.empty(), ErrorCode::invalid_argument, "detect: no queries");
  const auto results = try_detect(frame, queries, frame_index);
  std::vector<BoundingBox> out;
  out.reserve(results.size());
  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i])
      raise(ErrorCode::unresolved_query, "query '" + queries[i].text + "' matched nothing");
    out.push_back(*results[i]);
  }
  return out;
}

std::vector<KeypointState> track_points(const TrackerBackend& backend,
                                        const std::vector<Frame>& frames,
                                        const std::vector<KeypointState>& initial_points) {
  require(!frames.empty(), ErrorCode::invalid_argument, "track_points: empty frame sequence");
  std::vector<IndexedFrame> indexed;
  indexed.reserve(frames.size());
  for (size_t i = 0; i < frames.size(); ++i)
    indexed.push_back({&frames[i], static_cast<int>(i) + 1});
  return backend.track(indexed, initial_points);
}

// ---- ground truth sources ----

const env::FrameGroundTruth& EnvGroundTruth::frame(int frame_index) const {
  return env_->ground_truth(frame_index);
}
int EnvGroundTruth::frame_count() const { return env_->frame_count(); }
int EnvGroundTruth::frame_size() const { return env_->scene().frame_size; }
std::vector<std::pair<std::string, std::string>> EnvGroundTruth::object_labels() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& obj : env_->scene().objects)
    if (obj.task_relevant) out.push_back({obj.id, obj.label});
  return out;
}

const env::FrameGroundTruth& RecordGroundTruth::frame(int frame_index) const {
  require(frame_index >= 1 && frame_index <= static_cast<int>(rec_->gt.size()),
          ErrorCode::invalid_argument, "record gt: bad frame index");
  return rec_->gt[frame_index - 1];
}
int RecordGroundTruth::frame_count() const { return static_cast<int>(rec_->gt.size()); }
int RecordGroundTruth::frame_size() const {
  return rec_->frames.empty() ? (rec_->gt.empty() || rec_->gt[0].objects.empty()
                                     ? 512
                                     : rec_->gt[0].objects[0].amodal.height)
                              : rec_->frames[0].height;
}
std::vector<std::pair<std::string, std::string>> RecordGroundTruth::object_labels() const {
  return rec_->labels;
}

// ---- detector ----

namespace {

std::vector<std::string> tokens_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    out.push_back(tok);
  }
  return out;
}

bool label_matches(const std::string& query_text, const std::string& label) {
  const auto want = tokens_of(query_text);
  const auto have = tokens_of(label);
  if (want.empty()) return false;
  for (const auto& t : want)
    if (std::find(have.begin(), have.end(), t) == have.end()) return false;
  return true;
}

}  // namespace

std::vector<std::optional<BoundingBox>> OracleDetector::try_detect(
    const Frame& frame, const std::vector<TextQuery>& queries, int frame_index) const {
  (void)frame;
  const env::FrameGroundTruth& gt = gt_->frame(frame_index);
  const auto labels = gt_->object_labels();

  std::vector<std::optional<BoundingBox>> out(queries.size());
  for (size_t qi = 0; qi < queries.size(); ++qi) {
    const TextQuery& q = queries[qi];
    const env::ObjectGroundTruth* best = nullptr;
    double best_conf = -1.0;
    for (const auto& [id, label] : labels) {
      if (!label_matches(q.text, label)) continue;
      const env::ObjectGroundTruth* ogt = gt.find(id);
      if (!ogt || ogt->visible_count == 0) continue;
      const double conf =
          static_cast<double>(ogt->visible_count) / static_cast<double>(ogt->amodal_count);
      const bool better =
          !best || conf > best_conf ||
          (conf == best_conf && std::make_pair(ogt->bbox_row_min, ogt->bbox_col_min) <
                                    std::make_pair(best->bbox_row_min, best->bbox_col_min));
      if (better) {
        best = ogt;
        best_conf = conf;
      }
    }
    if (best) {
      BoundingBox box;
      box.row_min = best->bbox_row_min;
      box.col_min = best->bbox_col_min;
      box.row_max = best->bbox_row_max;
      box.col_max = best->bbox_col_max;
      box.confidence = best_conf;
      out[qi] = box;
    }
  }
  return out;
}

// ---- segmenter ----

std::vector<Mask> OracleSegmenter::segment(const Frame& frame,
                                           const std::vector<BoxPrompt>& prompts,
                                           int frame_index) const {
  const env::FrameGroundTruth& gt = gt_->frame(frame_index);
  const int n = frame.valid() ? frame.height : gt_->frame_size();
  std::vector<Mask> out;
  out.reserve(prompts.size());
  for (const auto& prompt : prompts) {
    const BoundingBox& box = prompt.box;
    require(box.row_min >= 0 && box.col_min >= 0 && box.row_max < n && box.col_max < n &&
                box.row_min <= box.row_max && box.col_min <= box.col_max,
            ErrorCode::invalid_argument, "segment: box outside frame bounds");
    Mask mask;
    mask.object_id = prompt.object_id;
    mask.bitmap = Bitmap(n, n);
    const env::ObjectGroundTruth* ogt = gt.find(prompt.object_id);
    size_t count = 0;
    if (ogt) {
      const Bitmap amodal = ogt->amodal.decode();
      const Bitmap occl = ogt->occlusion.decode();
      for (int r = box.row_min; r <= box.row_max; ++r)
        for (int c = box.col_min; c <= box.col_max; ++c)
          if (amodal.at(r, c) && !occl.at(r, c)) {
            mask.bitmap.set(r, c, true);
            ++count;
          }
    }
    if (count == 0)
      raise(ErrorCode::empty_mask,
            "segmenter returned zero pixels for object '" + prompt.object_id + "'");
    out.push_back(std::move(mask));
  }
  return out;
}

// ---- tracker ----

std::vector<KeypointState> OracleTracker::track(const std::vector<IndexedFrame>& frames,
                                                const std::vector<KeypointState>& initial) const {
  require(!frames.empty(), ErrorCode::tracker_failure, "oracle tracker: empty window");
  const int t_final = frames.back().frame_index;
  require(t_final >= 1 && t_final <= gt_->frame_count(), ErrorCode::tracker_failure,
          "oracle tracker: frame index outside ground truth");
  const int n = gt_->frame_size();

  std::vector<KeypointState> out = initial;
  for (auto& state : out) {
    double row = state.row;
    double col = state.col;
    for (int m = 2; m <= t_final; ++m) {
      const env::ObjectGroundTruth* ogt = gt_->frame(m).find(state.object_id);
      require(ogt != nullptr, ErrorCode::tracker_failure,
              "oracle tracker: unknown object '" + state.object_id + "'");
      row += ogt->motion_dr;
      col += ogt->motion_dc;
    }
    const long pr = std::lround(row);
    const long pc = std::lround(col);
    double visibility = 1.0;
    if (pr < 0 || pr >= n || pc < 0 || pc >= n) {
      visibility = 0.0;
    } else {
      const env::ObjectGroundTruth* ogt = gt_->frame(t_final).find(state.object_id);
      require(ogt != nullptr, ErrorCode::tracker_failure,
              "oracle tracker: unknown object '" + state.object_id + "'");
      if (ogt->occlusion.at(static_cast<int>(pr), static_cast<int>(pc))) visibility = 0.0;
    }
    state.row = row;
    state.col = col;
    state.visibility = visibility;
    state.frame_index = t_final;
  }
  return out;
}

}  // namespace glue::perception
