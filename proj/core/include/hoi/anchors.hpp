#pragma once

#include <cstddef>
#include <vector>

#include "hoi/box.hpp"

namespace hoi {

struct PyramidLevel {
  double stride;
  double base_size;
};

struct AnchorConfig {
  double image_width = 0.0;
  double image_height = 0.0;
  std::vector<PyramidLevel> levels;   // strides strictly increasing
  std::vector<double> scales;         // multiples of base_size
  std::vector<double> aspect_ratios;  // width / height
  bool clip_to_image = false;

  // Throws ConfigError on empty levels, non-increasing strides, empty or
  // non-positive scales/ratios, or non-positive image dimensions.
  void validate() const;
};

struct Anchor {
  Box box;
  int level;
  int index;
};

// Dense multi-scale anchor grid. One anchor per (level cell, scale, ratio);
// centers sit at cell centers, stride * (i + 0.5). Index assignment is
// level-major, then row, then column, then scale-major template order, so a
// fixed config always yields the same list.
std::vector<Anchor> generate_anchors(const AnchorConfig& cfg);

}  // namespace hoi
