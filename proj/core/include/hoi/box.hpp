#pragma once

namespace hoi {

// Axis-aligned rectangle in center form (cx, cy, w, h), double precision.
// Width and height must be strictly positive; degenerate boxes are rejected
// at construction so area ratios downstream never divide by zero.
struct Box {
  double cx;
  double cy;
  double w;
  double h;

  Box(double cx, double cy, double w, double h);
  static Box from_corners(double x1, double y1, double x2, double y2);

  double x1() const { return cx - 0.5 * w; }
  double y1() const { return cy - 0.5 * h; }
  double x2() const { return cx + 0.5 * w; }
  double y2() const { return cy + 0.5 * h; }
  double area() const { return w * h; }

  bool operator==(const Box& other) const = default;
};

double intersection_area(const Box& a, const Box& b);

// Intersection over union, in [0, 1]. Symmetric; 0 for disjoint boxes.
double iou(const Box& a, const Box& b);

// Fraction of b covered by a: area(a intersect b) / area(b). Not symmetric.
double coverage(const Box& a, const Box& b);

// Smallest box that contains both inputs.
Box union_box(const Box& a, const Box& b);

}  // namespace hoi
