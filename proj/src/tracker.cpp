// SPDX-License-Identifier: Apache-2.0
#include "sripipe/tracker.hpp"

#include <algorithm>
#include <string>

#include "sripipe/assignment.hpp"
#include "sripipe/errors.hpp"

namespace sripipe {

void TrackerConfig::validate() const {
  const std::pair<const char*, double> thresholds[] = {
      {"assoc_thresh_first", assoc_thresh_first},
      {"assoc_thresh_second", assoc_thresh_second},
      {"new_track_thresh", new_track_thresh},
      {"match_thresh", match_thresh},
      {"score_floor", score_floor}};
  for (const auto& [name, value] : thresholds)
    if (value < 0.0 || value > 1.0)
      fail(Errc::config, std::string(name) + " must lie in [0, 1]");
  if (track_buffer < 1) fail(Errc::config, "track_buffer must be at least 1");
  if (wrap_width && *wrap_width < 1)
    fail(Errc::config, "wrap_width must be positive when set");
}

const char* status_name(TrackStatus status) {
  switch (status) {
    case TrackStatus::tentative: return "tentative";
    case TrackStatus::confirmed: return "confirmed";
    case TrackStatus::lost: return "lost";
    case TrackStatus::removed: return "removed";
  }
  return "unknown";
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

namespace {

CostMatrix iou_cost(const std::vector<Track>& tracks,
                    const std::vector<std::size_t>& track_idx,
                    const std::vector<Detection>& dets,
                    const std::vector<std::size_t>& det_idx,
                    std::optional<int> wrap_width) {
  CostMatrix cost(static_cast<int>(track_idx.size()),
                  static_cast<int>(det_idx.size()));
  for (std::size_t r = 0; r < track_idx.size(); ++r) {
    const BBox tb = tracks[track_idx[r]].bbox();
    for (std::size_t c = 0; c < det_idx.size(); ++c)
      cost.at(static_cast<int>(r), static_cast<int>(c)) =
          1.0 - box_iou(tb, dets[det_idx[c]].bbox, wrap_width);
  }
  return cost;
}

}  // namespace

std::vector<TrackOutput> Tracker::step(const std::vector<Detection>& detections) {
  ++frame_index_;

  std::vector<std::size_t> high, low;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const double score = detections[i].score;
    if (score >= cfg_.assoc_thresh_first)
      high.push_back(i);
    else if (score >= cfg_.score_floor && score < cfg_.assoc_thresh_second)
      low.push_back(i);
  }

  for (Track& track : tracks_) track.state = kf_predict(track.state);

  std::vector<char> track_matched(tracks_.size(), 0);
  std::vector<char> det_matched(detections.size(), 0);

  const auto run_association = [&](const std::vector<std::size_t>& det_idx) {
    std::vector<std::size_t> pool;
    for (std::size_t t = 0; t < tracks_.size(); ++t)
      if (!track_matched[t]) pool.push_back(t);
    if (pool.empty() || det_idx.empty()) return;
    const CostMatrix cost =
        iou_cost(tracks_, pool, detections, det_idx, cfg_.wrap_width);
    const AssignResult result = assign(cost, cfg_.match_thresh);
    for (const auto& [r, c] : result.matches) {
      Track& track = tracks_[pool[static_cast<std::size_t>(r)]];
      const Detection& det = detections[det_idx[static_cast<std::size_t>(c)]];
      track.state = kf_update(track.state, det.bbox);
      track.status = TrackStatus::confirmed;
      track.frames_since_update = 0;
      track.last_score = det.score;
      track.class_id = det.class_id;
      track_matched[pool[static_cast<std::size_t>(r)]] = 1;
      det_matched[det_idx[static_cast<std::size_t>(c)]] = 1;
    }
  };

  run_association(high);
  run_association(low);

  for (std::size_t i : high) {
    if (det_matched[i]) continue;
    if (detections[i].score < cfg_.new_track_thresh) continue;
    Track track;
    track.id = next_id_++;
    track.state = kf_init(detections[i].bbox);
    track.status = TrackStatus::tentative;
    track.last_score = detections[i].score;
    track.class_id = detections[i].class_id;
    tracks_.push_back(std::move(track));
  }

  for (std::size_t t = 0; t < track_matched.size(); ++t) {
    if (track_matched[t]) continue;
    Track& track = tracks_[t];
    ++track.frames_since_update;
    if (track.status == TrackStatus::confirmed) track.status = TrackStatus::lost;
    if (track.frames_since_update > cfg_.track_buffer) {
      track.status = TrackStatus::removed;
      removed_ids_.push_back(track.id);
    }
  }
  std::erase_if(tracks_, [](const Track& track) {
    return track.status == TrackStatus::removed;
  });

  std::vector<TrackOutput> outputs;
  for (const Track& track : tracks_) {
    if (track.status != TrackStatus::confirmed) continue;
    outputs.push_back(TrackOutput{track.id, track.bbox(), track.last_score,
                                  track.status, track.class_id});
  }
  return outputs;
}

}  // namespace sripipe
