#include "hoi/box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hoi {

Box::Box(double cx, double cy, double w, double h) : cx(cx), cy(cy), w(w), h(h) {
  if (!(std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h))) {
    throw std::invalid_argument("Box: non-finite coordinate");
  }
  if (!(w > 0.0 && h > 0.0)) {
    throw std::invalid_argument("Box: width and height must be positive");
  }
}

Box Box::from_corners(double x1, double y1, double x2, double y2) {
  return Box(0.5 * (x1 + x2), 0.5 * (y1 + y2), x2 - x1, y2 - y1);
}

double intersection_area(const Box& a, const Box& b) {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

// Areas are recomputed from corner differences so that identical or nested
// boxes produce bitwise-exact ratios (iou(a, a) == 1.0, coverage == 1.0 when
// b is inside a).
double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double area_a = (a.x2() - a.x1()) * (a.y2() - a.y1());
  const double area_b = (b.x2() - b.x1()) * (b.y2() - b.y1());
  return inter / (area_a + area_b - inter);
}

double coverage(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double area_b = (b.x2() - b.x1()) * (b.y2() - b.y1());
  return inter / area_b;
}

Box union_box(const Box& a, const Box& b) {
  return Box::from_corners(std::min(a.x1(), b.x1()), std::min(a.y1(), b.y1()),
                           std::max(a.x2(), b.x2()), std::max(a.y2(), b.y2()));
}

}  // namespace hoi
