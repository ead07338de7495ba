// SPDX-License-Identifier: Apache-2.0
// Precision / recall / AP metrics for box and mask branches.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sripipe/annotations.hpp"
#include "sripipe/detections.hpp"
#include "sripipe/geometry.hpp"

namespace sripipe {

enum class EvalKind { box, mask };

struct EvalDims {
  int width = 2048;
  int height = 128;
};

// Per-polygon even-odd fill sampled at pixel centers, multi-polygon union.
// With wrap enabled columns are taken modulo width.
std::vector<uint8_t> rasterize_polygons(std::span<const Polygon> polygons,
                                        int width, int height, bool wrap);

double mask_iou(std::span<const Polygon> a, std::span<const Polygon> b,
                int width, int height, bool wrap = false);

struct MatchResult {
  // All vectors follow the detections sorted by descending score
  // (ties keep input order).
  std::vector<int> det_order;    // index into the input detections
  std::vector<double> scores;
  std::vector<uint8_t> tp;
  std::vector<int> matched_gt;   // -1 for false positives
  std::vector<uint8_t> gt_matched;
};

MatchResult match_predictions(std::span<const Detection> dets,
                              std::span<const InstanceAnnotation> gts,
                              double iou_thresh, EvalKind kind,
                              std::optional<int> wrap_width,
                              const EvalDims& dims);

struct PrPoint {
  double precision = 0.0;
  double recall = 0.0;
  double confidence = 0.0;

  bool operator==(const PrPoint&) const = default;
};

// One point per distinct confidence, from high to low.
std::vector<PrPoint> pr_curve(std::span<const double> scores,
                              std::span<const uint8_t> tp, std::size_t n_gt);

// 101-point interpolated AP over the monotone precision envelope.
double average_precision(std::span<const PrPoint> curve);

struct ClassReport {
  int class_id = 0;
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double ap50 = 0.0;
  double map50_95 = 0.0;
  std::vector<double> ap_per_threshold;  // IoU 0.50, 0.55, ..., 0.95
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
};

struct EvalReport {
  EvalKind branch = EvalKind::box;
  double precision = 0.0;  // at the best-F1 confidence on the 0.50 curve
  double recall = 0.0;
  double ap50 = 0.0;
  double map50_95 = 0.0;
  std::vector<double> ap_per_threshold;  // macro-averaged per IoU threshold
  std::vector<ClassReport> per_class;
  bool no_ground_truth = false;
};

using GroundTruthMap = std::map<std::string, std::vector<InstanceAnnotation>>;

EvalReport evaluate(const DetectionMap& dets, const GroundTruthMap& gts,
                    EvalKind kind, std::optional<int> wrap_width,
                    const EvalDims& dims);

std::string format_eval_table(const EvalReport& report);

inline constexpr double kIouThresholds[] = {0.50, 0.55, 0.60, 0.65, 0.70,
                                            0.75, 0.80, 0.85, 0.90, 0.95};

}  // namespace sripipe
