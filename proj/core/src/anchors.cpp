#include "hoi/anchors.hpp"

#include <algorithm>
#include <cmath>

#include "hoi/errors.hpp"

namespace hoi {

void AnchorConfig::validate() const {
  if (!(image_width > 0.0) || !(image_height > 0.0)) {
    throw ConfigError("anchors: image dimensions must be positive");
  }
  if (levels.empty()) {
    throw ConfigError("anchors: at least one pyramid level is required");
  }
  double prev_stride = 0.0;
  for (const auto& level : levels) {
    if (!(level.stride > prev_stride)) {
      throw ConfigError("anchors: strides must be positive and strictly increasing");
    }
    if (!(level.base_size > 0.0)) {
      throw ConfigError("anchors: base sizes must be positive");
    }
    prev_stride = level.stride;
  }
  if (scales.empty() || aspect_ratios.empty()) {
    throw ConfigError("anchors: scales and aspect ratios must be non-empty");
  }
  for (double s : scales) {
    if (!(s > 0.0)) throw ConfigError("anchors: scales must be positive");
  }
  for (double r : aspect_ratios) {
    if (!(r > 0.0)) throw ConfigError("anchors: aspect ratios must be positive");
  }
}

std::vector<Anchor> generate_anchors(const AnchorConfig& cfg) {
  cfg.validate();

  std::vector<Anchor> anchors;
  int index = 0;
  for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
    const auto& level = cfg.levels[li];
    const auto cells_x = static_cast<int>(std::ceil(cfg.image_width / level.stride));
    const auto cells_y = static_cast<int>(std::ceil(cfg.image_height / level.stride));
    for (int iy = 0; iy < cells_y; ++iy) {
      const double cy = level.stride * (iy + 0.5);
      for (int ix = 0; ix < cells_x; ++ix) {
        const double cx = level.stride * (ix + 0.5);
        for (double scale : cfg.scales) {
          const double size = level.base_size * scale;
          for (double ratio : cfg.aspect_ratios) {
            double w = size * std::sqrt(ratio);
            double h = size / std::sqrt(ratio);
            Box box(cx, cy, w, h);
            if (cfg.clip_to_image) {
              const double x1 = std::max(box.x1(), 0.0);
              const double y1 = std::max(box.y1(), 0.0);
              const double x2 = std::min(box.x2(), cfg.image_width);
              const double y2 = std::min(box.y2(), cfg.image_height);
              box = Box::from_corners(x1, y1, x2, y2);
            }
            anchors.push_back(Anchor{box, static_cast<int>(li), index++});
          }
        }
      }
    }
  }
  return anchors;
}

}  // namespace hoi
