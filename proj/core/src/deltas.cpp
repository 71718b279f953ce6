#include "hoi/deltas.hpp"

#include <cmath>
#include <stdexcept>

namespace hoi {

Delta4 encode_deltas(const Box& anchor, const Box& target) {
  return Delta4{(target.cx - anchor.cx) / anchor.w, (target.cy - anchor.cy) / anchor.h,
                std::log(target.w / anchor.w), std::log(target.h / anchor.h)};
}

Box decode_deltas(const Box& anchor, const Delta4& d) {
  if (!(std::isfinite(d.dx) && std::isfinite(d.dy) && std::isfinite(d.dw) && std::isfinite(d.dh))) {
    throw std::domain_error("decode_deltas: non-finite delta");
  }
  return Box(anchor.cx + d.dx * anchor.w, anchor.cy + d.dy * anchor.h,
             anchor.w * std::exp(d.dw), anchor.h * std::exp(d.dh));
}

}  // namespace hoi
