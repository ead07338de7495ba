// SPDX-License-Identifier: Apache-2.0
#include "sripipe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "sripipe/errors.hpp"
#include "sripipe/lidar_frame.hpp"
#include "sripipe/sri_projection.hpp"

namespace sripipe {

std::vector<std::string> list_frame_ids(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root))
    fail(Errc::io, root.string() + " is not a directory");
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    if (!std::filesystem::exists(entry.path() / "range.png")) continue;
    ids.push_back(entry.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string format_mot_rows(std::span<const TrackOutput> outputs,
                            int frame_number) {
  std::string out;
  char buf[160];
  for (const TrackOutput& t : outputs) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%.4f\n",
                  frame_number, t.id, t.bbox.x, t.bbox.y, t.bbox.w, t.bbox.h,
                  t.score);
    out += buf;
  }
  return out;
}

TrackingResult run_tracking(std::span<const std::string> frame_ids,
                            const DetectionMap& detections,
                            const TrackerConfig& cfg) {
  Tracker tracker(cfg);
  TrackingResult result;
  static const std::vector<Detection> kNone;
  for (const std::string& id : frame_ids) {
    const auto it = detections.find(id);
    if (it == detections.end()) ++result.missing_frames;
    const auto outputs = tracker.step(it == detections.end() ? kNone : it->second);
    ++result.frames;
    result.mot_csv += format_mot_rows(outputs, result.frames);
  }
  return result;
}

namespace {

// 3x5 digit glyphs, one row per byte, three low bits used.
constexpr uint8_t kDigitRows[10][5] = {
    {0b111, 0b101, 0b101, 0b101, 0b111}, {0b010, 0b110, 0b010, 0b010, 0b111},
    {0b111, 0b001, 0b111, 0b100, 0b111}, {0b111, 0b001, 0b111, 0b001, 0b111},
    {0b101, 0b101, 0b111, 0b001, 0b001}, {0b111, 0b100, 0b111, 0b001, 0b111},
    {0b111, 0b100, 0b111, 0b101, 0b111}, {0b111, 0b001, 0b010, 0b010, 0b010},
    {0b111, 0b101, 0b111, 0b101, 0b111}, {0b111, 0b101, 0b111, 0b001, 0b111}};

constexpr uint8_t kPalette[8][3] = {
    {255, 64, 64},  {64, 255, 64},  {96, 96, 255},  {255, 224, 32},
    {255, 64, 255}, {64, 255, 255}, {255, 160, 32}, {224, 224, 224}};

void set_pixel(PseudoRgbImage& image, int64_t x, int64_t y,
               const uint8_t rgb[3]) {
  if (x < 0 || y < 0 || x >= image.width || y >= image.height) return;
  const std::size_t i =
      3 * (static_cast<std::size_t>(y) * image.width + static_cast<std::size_t>(x));
  image.pixels[i] = rgb[0];
  image.pixels[i + 1] = rgb[1];
  image.pixels[i + 2] = rgb[2];
}

void draw_digit(PseudoRgbImage& image, int digit, int64_t x, int64_t y,
                const uint8_t rgb[3]) {
  for (int row = 0; row < 5; ++row)
    for (int col = 0; col < 3; ++col)
      if (kDigitRows[digit][row] & (0b100 >> col))
        set_pixel(image, x + col, y + row, rgb);
}

}  // namespace

void draw_track_overlay(PseudoRgbImage& image,
                        std::span<const TrackOutput> outputs) {
  for (const TrackOutput& t : outputs) {
    const uint8_t* rgb = kPalette[static_cast<std::size_t>(t.id) % 8];
    const auto x0 = static_cast<int64_t>(std::llround(t.bbox.x));
    const auto y0 = static_cast<int64_t>(std::llround(t.bbox.y));
    const auto x1 = static_cast<int64_t>(std::llround(t.bbox.x + t.bbox.w));
    const auto y1 = static_cast<int64_t>(std::llround(t.bbox.y + t.bbox.h));
    for (int64_t x = x0; x <= x1; ++x) {
      set_pixel(image, x, y0, rgb);
      set_pixel(image, x, y1, rgb);
    }
    for (int64_t y = y0; y <= y1; ++y) {
      set_pixel(image, x0, y, rgb);
      set_pixel(image, x1, y, rgb);
    }
    const std::string digits = std::to_string(t.id);
    int64_t tx = x0 + 1;
    const int64_t ty = y0 - 6 < 0 ? y0 + 1 : y0 - 6;
    for (const char c : digits) {
      draw_digit(image, c - '0', tx, ty, rgb);
      tx += 4;
    }
  }
}

namespace {

double nearest_rank(std::vector<double> values, double pct) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

}  // namespace

std::string TimingReport::decomposition() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f+%.1f+%.1f", median_pre, median_inf,
                median_post);
  return buf;
}

TimingReport bench_pipeline(const std::filesystem::path& frames_root,
                            std::span<const std::string> frame_ids,
                            const DetectionMap& detections,
                            const PipelineConfig& cfg) {
  cfg.validate();
  const std::size_t total_iterations =
      frame_ids.size() * static_cast<std::size_t>(cfg.timing.repetitions);
  if (total_iterations < static_cast<std::size_t>(cfg.timing.warmup) + 1)
    fail(Errc::insufficient_frames,
         std::to_string(frame_ids.size()) + " frames x " +
             std::to_string(cfg.timing.repetitions) +
             " repetitions cannot cover warmup " +
             std::to_string(cfg.timing.warmup) + " plus one sample");

  FileReplayDetector detector{detections};
  Tracker tracker(cfg.tracker);

  using clock = std::chrono::steady_clock;
  const auto ms_between = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  std::vector<double> pre, inf, post, total;
  const std::size_t measured =
      total_iterations - static_cast<std::size_t>(cfg.timing.warmup);
  pre.reserve(measured);
  inf.reserve(measured);
  post.reserve(measured);
  total.reserve(measured);

  std::size_t iteration = 0;
  int frame_number = 0;
  std::size_t sink = 0;
  for (int rep = 0; rep < cfg.timing.repetitions; ++rep) {
    for (const std::string& id : frame_ids) {
      const auto t0 = clock::now();
      const LidarFrame frame =
          load_frame(frames_root / id, cfg.frame.range_scale_mm);
      const PseudoRgbImage image = compose_pseudo_rgb(frame, cfg.normalization);
      const auto t1 = clock::now();
      const std::vector<Detection> dets = detector.detect(image, id);
      const auto t2 = clock::now();
      const auto outputs = tracker.step(dets);
      const std::string rows = format_mot_rows(outputs, ++frame_number);
      sink += rows.size();
      const auto t3 = clock::now();

      if (iteration++ < static_cast<std::size_t>(cfg.timing.warmup)) continue;
      pre.push_back(ms_between(t0, t1));
      inf.push_back(ms_between(t1, t2));
      post.push_back(ms_between(t2, t3));
      total.push_back(ms_between(t0, t3));
    }
  }
  if (sink == static_cast<std::size_t>(-1))
    fail(Errc::io, "serialized output overflowed");

  TimingReport report;
  report.samples = total.size();
  report.median_pre = nearest_rank(pre, 50.0);
  report.median_inf = nearest_rank(inf, 50.0);
  report.median_post = nearest_rank(post, 50.0);
  report.median_total = nearest_rank(total, 50.0);
  report.p95_pre = nearest_rank(pre, 95.0);
  report.p95_inf = nearest_rank(inf, 95.0);
  report.p95_post = nearest_rank(post, 95.0);
  report.p95_total = nearest_rank(std::move(total), 95.0);
  return report;
}

}  // namespace sripipe
