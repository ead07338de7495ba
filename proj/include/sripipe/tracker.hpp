// SPDX-License-Identifier: Apache-2.0
// Two-stage score-gated multi-object tracker with Kalman prediction and
// IoU assignment.
#pragma once

#include <optional>
#include <vector>

#include "sripipe/detections.hpp"
#include "sripipe/geometry.hpp"
#include "sripipe/kalman.hpp"

namespace sripipe {

struct TrackerConfig {
  double assoc_thresh_first = 0.7;
  double assoc_thresh_second = 0.7;
  double new_track_thresh = 0.75;
  int track_buffer = 20;
  double match_thresh = 0.8;
  double score_floor = 0.1;
  std::optional<int> wrap_width;  // seam-aware IoU when set

  bool operator==(const TrackerConfig&) const = default;
  void validate() const;
};

enum class TrackStatus { tentative, confirmed, lost, removed };

const char* status_name(TrackStatus status);

struct Track {
  int id = 0;
  KalmanState state;
  TrackStatus status = TrackStatus::tentative;
  int frames_since_update = 0;
  double last_score = 0.0;
  int class_id = 0;

  BBox bbox() const { return state.bbox(); }
};

struct TrackOutput {
  int id = 0;
  BBox bbox;
  double score = 0.0;
  TrackStatus status = TrackStatus::confirmed;
  int class_id = 0;
};

class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg);

  // Advances one frame and returns the confirmed tracks, ordered by id.
  std::vector<TrackOutput> step(const std::vector<Detection>& detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<int>& removed_ids() const { return removed_ids_; }
  int frame_index() const { return frame_index_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  TrackerConfig cfg_;
  std::vector<Track> tracks_;  // live tracks only, id ascending
  std::vector<int> removed_ids_;
  int next_id_ = 1;
  int frame_index_ = 0;
};

}  // namespace sripipe
