// SPDX-License-Identifier: Apache-2.0
// Frame-sequence orchestration: tracking runs, timing, overlays.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sripipe/config.hpp"
#include "sripipe/detections.hpp"
#include "sripipe/tracker.hpp"

namespace sripipe {

// Subdirectories of root that contain a range.png, sorted by name.
std::vector<std::string> list_frame_ids(const std::filesystem::path& root);

// MOT-style rows `frame,id,x,y,w,h,score` for one frame.
std::string format_mot_rows(std::span<const TrackOutput> outputs,
                            int frame_number);

struct TrackingResult {
  std::string mot_csv;
  int frames = 0;
  std::size_t missing_frames = 0;  // ids absent from the detections map
};

TrackingResult run_tracking(std::span<const std::string> frame_ids,
                            const DetectionMap& detections,
                            const TrackerConfig& cfg);

void draw_track_overlay(PseudoRgbImage& image,
                        std::span<const TrackOutput> outputs);

struct TimingReport {
  double median_pre = 0.0;
  double median_inf = 0.0;
  double median_post = 0.0;
  double median_total = 0.0;
  double p95_pre = 0.0;
  double p95_inf = 0.0;
  double p95_post = 0.0;
  double p95_total = 0.0;
  std::size_t samples = 0;

  // Stage medians joined as `pre+inf+post`, one decimal each.
  std::string decomposition() const;
};

// Replays the frame sequence `timing.repetitions` times through
// load + compose, detect, and track + serialize, timing each stage per frame.
// The first `timing.warmup` iterations are excluded from the statistics.
TimingReport bench_pipeline(const std::filesystem::path& frames_root,
                            std::span<const std::string> frame_ids,
                            const DetectionMap& detections,
                            const PipelineConfig& cfg);

}  // namespace sripipe
