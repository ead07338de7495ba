// SPDX-License-Identifier: Apache-2.0
#include "sripipe/geometry.hpp"

#include <algorithm>
#include <limits>

namespace sripipe {

double box_iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double box_iou(const BBox& a, const BBox& b, std::optional<int> wrap_width) {
  if (!wrap_width) return box_iou(a, b);
  const double w = static_cast<double>(*wrap_width);
  double best = 0.0;
  for (const double shift : {-w, 0.0, w}) {
    BBox shifted = b;
    shifted.x += shift;
    best = std::max(best, box_iou(a, shifted));
  }
  return best;
}

BBox bbox_of(std::span<const Polygon> polygons) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const Polygon& poly : polygons) {
    for (const Vertex& v : poly) {
      any = true;
      min_x = std::min(min_x, v.x);
      min_y = std::min(min_y, v.y);
      max_x = std::max(max_x, v.x);
      max_y = std::max(max_y, v.y);
    }
  }
  if (!any) return {};
  return {min_x, min_y, max_x - min_x, max_y - min_y};
}

}  // namespace sripipe
