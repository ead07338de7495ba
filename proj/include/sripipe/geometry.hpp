// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

namespace sripipe {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

using Polygon = std::vector<Vertex>;

/// Axis-aligned box in pixel units; (x, y) is the top-left corner.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double area() const { return w * h; }

  static BBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

double box_iou(const BBox& a, const BBox& b);

// IoU on a cylinder of circumference wrap_width: the second box is tried at
// column offsets {-wrap, 0, +wrap} and the best overlap wins. Without a wrap
// width this is plain rectangle IoU.
double box_iou(const BBox& a, const BBox& b, std::optional<int> wrap_width);

// Tight axis-aligned hull over every vertex of every polygon.
BBox bbox_of(std::span<const Polygon> polygons);

}  // namespace sripipe
