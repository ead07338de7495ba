// SPDX-License-Identifier: Apache-2.0
#include "sripipe/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "sripipe/errors.hpp"

namespace sripipe {

namespace {

int64_t mod_floor(int64_t value, int64_t modulus) {
  const int64_t r = value % modulus;
  return r < 0 ? r + modulus : r;
}

void fill_span(std::vector<uint8_t>& grid, int row, double x0, double x1,
               int width, bool wrap) {
  // Pixel center col + 0.5 lies in the half-open span [x0, x1).
  auto col_begin = static_cast<int64_t>(std::ceil(x0 - 0.5));
  auto col_end = static_cast<int64_t>(std::ceil(x1 - 0.5));
  if (col_end <= col_begin) return;
  uint8_t* row_ptr = grid.data() + static_cast<std::size_t>(row) * width;
  if (!wrap) {
    col_begin = std::max<int64_t>(col_begin, 0);
    col_end = std::min<int64_t>(col_end, width);
    for (int64_t c = col_begin; c < col_end; ++c) row_ptr[c] = 1;
    return;
  }
  if (col_end - col_begin >= width) {
    for (int c = 0; c < width; ++c) row_ptr[c] = 1;
    return;
  }
  for (int64_t c = col_begin; c < col_end; ++c)
    row_ptr[mod_floor(c, width)] = 1;
}

}  // namespace

std::vector<uint8_t> rasterize_polygons(std::span<const Polygon> polygons,
                                        int width, int height, bool wrap) {
  if (width < 1 || height < 1)
    fail(Errc::dimension_mismatch, "raster grid must be at least 1x1");
  std::vector<uint8_t> grid(
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  std::vector<double> crossings;
  for (const Polygon& poly : polygons) {
    if (poly.size() < 3) continue;
    for (int row = 0; row < height; ++row) {
      const double yc = static_cast<double>(row) + 0.5;
      crossings.clear();
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vertex& a = poly[i];
        const Vertex& b = poly[(i + 1) % poly.size()];
        const bool crosses = (a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y);
        if (!crosses) continue;
        crossings.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
      }
      std::sort(crossings.begin(), crossings.end());
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2)
        fill_span(grid, row, crossings[k], crossings[k + 1], width, wrap);
    }
  }
  return grid;
}

double mask_iou(std::span<const Polygon> a, std::span<const Polygon> b,
                int width, int height, bool wrap) {
  const std::vector<uint8_t> ga = rasterize_polygons(a, width, height, wrap);
  const std::vector<uint8_t> gb = rasterize_polygons(b, width, height, wrap);
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    inter += ga[i] & gb[i];
    uni += ga[i] | gb[i];
  }
  if (uni == 0) return 0.0;  // either side rasterized empty
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

// Detections are rows of `iou` in descending-score order, ground truths are
// columns. Entries below zero mark impossible pairs.
MatchResult greedy_match(std::vector<int> det_order,
                         std::vector<double> scores_sorted,
                         const std::vector<std::vector<double>>& iou,
                         std::size_t n_gt, double iou_thresh) {
  MatchResult result;
  result.det_order = std::move(det_order);
  result.scores = std::move(scores_sorted);
  result.tp.assign(result.det_order.size(), 0);
  result.matched_gt.assign(result.det_order.size(), -1);
  result.gt_matched.assign(n_gt, 0);
  for (std::size_t d = 0; d < result.det_order.size(); ++d) {
    double best_iou = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < n_gt; ++g) {
      if (result.gt_matched[g]) continue;
      const double value = iou[d][g];
      if (value < iou_thresh) continue;
      if (best_gt == -1 || value > best_iou) {
        best_iou = value;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt != -1) {
      result.tp[d] = 1;
      result.matched_gt[d] = best_gt;
      result.gt_matched[static_cast<std::size_t>(best_gt)] = 1;
    }
  }
  return result;
}

std::vector<int> sorted_det_order(std::span<const Detection> dets) {
  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dets[static_cast<std::size_t>(a)].score >
           dets[static_cast<std::size_t>(b)].score;
  });
  return order;
}

double pair_iou(const Detection& det, const InstanceAnnotation& gt,
                EvalKind kind, std::optional<int> wrap_width,
                const EvalDims& dims) {
  if (det.class_id != gt.class_id) return -1.0;
  if (kind == EvalKind::box) return box_iou(det.bbox, gt.bbox, wrap_width);
  return mask_iou(det.mask, gt.polygons, dims.width, dims.height,
                  wrap_width.has_value());
}

std::vector<std::vector<double>> iou_matrix(std::span<const Detection> dets,
                                            std::span<const InstanceAnnotation> gts,
                                            const std::vector<int>& order,
                                            EvalKind kind,
                                            std::optional<int> wrap_width,
                                            const EvalDims& dims) {
  std::vector<std::vector<double>> iou(order.size());
  for (std::size_t d = 0; d < order.size(); ++d) {
    iou[d].resize(gts.size());
    const Detection& det = dets[static_cast<std::size_t>(order[d])];
    for (std::size_t g = 0; g < gts.size(); ++g)
      iou[d][g] = pair_iou(det, gts[g], kind, wrap_width, dims);
  }
  return iou;
}

}  // namespace

MatchResult match_predictions(std::span<const Detection> dets,
                              std::span<const InstanceAnnotation> gts,
                              double iou_thresh, EvalKind kind,
                              std::optional<int> wrap_width,
                              const EvalDims& dims) {
  std::vector<int> order = sorted_det_order(dets);
  std::vector<double> scores(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    scores[i] = dets[static_cast<std::size_t>(order[i])].score;
  const auto iou = iou_matrix(dets, gts, order, kind, wrap_width, dims);
  return greedy_match(std::move(order), std::move(scores), iou, gts.size(),
                      iou_thresh);
}

std::vector<PrPoint> pr_curve(std::span<const double> scores,
                              std::span<const uint8_t> tp, std::size_t n_gt) {
  if (scores.size() != tp.size())
    fail(Errc::dimension_mismatch, "scores and flags must align");
  std::vector<PrPoint> curve;
  std::size_t cum_tp = 0, cum_fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (tp[i])
      ++cum_tp;
    else
      ++cum_fp;
    const bool group_end = i + 1 == scores.size() || scores[i + 1] != scores[i];
    if (!group_end) continue;
    PrPoint point;
    point.confidence = scores[i];
    point.precision =
        static_cast<double>(cum_tp) / static_cast<double>(cum_tp + cum_fp);
    point.recall = n_gt == 0
                       ? 0.0
                       : static_cast<double>(cum_tp) / static_cast<double>(n_gt);
    curve.push_back(point);
  }
  return curve;
}

double average_precision(std::span<const PrPoint> curve) {
  if (curve.empty()) return 0.0;
  std::vector<double> envelope(curve.size());
  double running = 0.0;
  for (std::size_t i = curve.size(); i-- > 0;) {
    running = std::max(running, curve[i].precision);
    envelope[i] = running;
  }
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = static_cast<double>(k) / 100.0;
    double value = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i].recall >= r) {
        value = envelope[i];
        break;
      }
    }
    sum += value;
  }
  return sum / 101.0;
}

namespace {

struct PooledFlags {
  std::vector<double> scores;
  std::vector<uint8_t> tp;
};

constexpr std::size_t kNumThresholds = std::size(kIouThresholds);

struct BestF1 {
  double precision = 0.0;
  double recall = 0.0;
};

BestF1 best_f1_point(std::span<const PrPoint> curve) {
  BestF1 best;
  double best_f1 = -1.0;
  for (const PrPoint& point : curve) {
    const double denom = point.precision + point.recall;
    const double f1 = denom > 0.0 ? 2.0 * point.precision * point.recall / denom
                                  : 0.0;
    if (f1 > best_f1) {
      best_f1 = f1;
      best.precision = point.precision;
      best.recall = point.recall;
    }
  }
  return best;
}

}  // namespace

EvalReport evaluate(const DetectionMap& dets, const GroundTruthMap& gts,
                    EvalKind kind, std::optional<int> wrap_width,
                    const EvalDims& dims) {
  EvalReport report;
  report.branch = kind;
  report.ap_per_threshold.assign(kNumThresholds, 0.0);

  std::set<std::string> frame_ids;
  for (const auto& [id, list] : dets) frame_ids.insert(id);
  for (const auto& [id, list] : gts) frame_ids.insert(id);

  std::vector<int> class_ids;
  std::map<int, std::string> class_labels;
  std::size_t total_gt = 0;
  for (const auto& [id, list] : gts) {
    for (const InstanceAnnotation& gt : list) {
      ++total_gt;
      if (!class_labels.count(gt.class_id)) {
        class_labels[gt.class_id] = gt.label;
        class_ids.push_back(gt.class_id);
      }
    }
  }
  std::sort(class_ids.begin(), class_ids.end());

  if (total_gt == 0) {
    report.no_ground_truth = true;
    return report;
  }

  static const std::vector<Detection> kNoDets;
  static const std::vector<InstanceAnnotation> kNoGts;

  for (const int class_id : class_ids) {
    ClassReport cls;
    cls.class_id = class_id;
    cls.label = class_labels[class_id];
    cls.ap_per_threshold.assign(kNumThresholds, 0.0);

    std::vector<PooledFlags> pooled(kNumThresholds);
    for (const std::string& frame : frame_ids) {
      const auto dit = dets.find(frame);
      const auto git = gts.find(frame);
      const auto& frame_dets = dit == dets.end() ? kNoDets : dit->second;
      const auto& frame_gts = git == gts.end() ? kNoGts : git->second;

      std::vector<Detection> class_dets;
      for (const Detection& det : frame_dets)
        if (det.class_id == class_id) class_dets.push_back(det);
      std::vector<InstanceAnnotation> class_gts;
      for (const InstanceAnnotation& gt : frame_gts)
        if (gt.class_id == class_id) class_gts.push_back(gt);
      cls.n_gt += class_gts.size();
      cls.n_det += class_dets.size();
      if (class_dets.empty()) continue;

      std::vector<int> order = sorted_det_order(class_dets);
      std::vector<double> scores(order.size());
      for (std::size_t i = 0; i < order.size(); ++i)
        scores[i] = class_dets[static_cast<std::size_t>(order[i])].score;
      const auto iou =
          iou_matrix(class_dets, class_gts, order, kind, wrap_width, dims);
      for (std::size_t t = 0; t < kNumThresholds; ++t) {
        const MatchResult match = greedy_match(order, scores, iou,
                                               class_gts.size(),
                                               kIouThresholds[t]);
        pooled[t].scores.insert(pooled[t].scores.end(), match.scores.begin(),
                                match.scores.end());
        pooled[t].tp.insert(pooled[t].tp.end(), match.tp.begin(),
                            match.tp.end());
      }
    }

    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      auto& flags = pooled[t];
      std::vector<std::size_t> order(flags.scores.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return flags.scores[a] > flags.scores[b];
                       });
      std::vector<double> scores(order.size());
      std::vector<uint8_t> tp(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        scores[i] = flags.scores[order[i]];
        tp[i] = flags.tp[order[i]];
      }
      const std::vector<PrPoint> curve = pr_curve(scores, tp, cls.n_gt);
      cls.ap_per_threshold[t] = average_precision(curve);
      if (t == 0) {
        const BestF1 best = best_f1_point(curve);
        cls.precision = best.precision;
        cls.recall = best.recall;
      }
    }
    cls.ap50 = cls.ap_per_threshold[0];
    cls.map50_95 = std::accumulate(cls.ap_per_threshold.begin(),
                                   cls.ap_per_threshold.end(), 0.0) /
                   static_cast<double>(kNumThresholds);
    report.per_class.push_back(std::move(cls));
  }

  const auto n_classes = static_cast<double>(report.per_class.size());
  for (const ClassReport& cls : report.per_class) {
    report.precision += cls.precision / n_classes;
    report.recall += cls.recall / n_classes;
    for (std::size_t t = 0; t < kNumThresholds; ++t)
      report.ap_per_threshold[t] += cls.ap_per_threshold[t] / n_classes;
  }
  report.ap50 = report.ap_per_threshold[0];
  report.map50_95 = std::accumulate(report.ap_per_threshold.begin(),
                                    report.ap_per_threshold.end(), 0.0) /
                    static_cast<double>(kNumThresholds);
  return report;
}

std::string format_eval_table(const EvalReport& report) {
  std::string out = "Precision | Recall | mAP @0.5 | mAP@0.5-0.95\n";
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%9.3f | %6.3f | %8.3f | %12.3f\n",
                report.precision, report.recall, report.ap50, report.map50_95);
  out += buf;
  if (report.per_class.size() > 1) {
    out += "\nPer class:\n";
    for (const ClassReport& cls : report.per_class) {
      std::snprintf(buf, sizeof(buf), "%-12s %9.3f | %6.3f | %8.3f | %12.3f\n",
                    cls.label.c_str(), cls.precision, cls.recall, cls.ap50,
                    cls.map50_95);
      out += buf;
    }
  }
  return out;
}

}  // namespace sripipe
