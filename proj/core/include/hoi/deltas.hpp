#pragma once

#include "hoi/box.hpp"

namespace hoi {

// Regression parameterization of a target box relative to an anchor:
// offsets normalized by anchor size, log-scale size ratios.
struct Delta4 {
  double dx;
  double dy;
  double dw;
  double dh;

  bool operator==(const Delta4& other) const = default;
};

Delta4 encode_deltas(const Box& anchor, const Box& target);

// Inverse of encode_deltas; throws std::domain_error on non-finite deltas.
Box decode_deltas(const Box& anchor, const Delta4& deltas);

}  // namespace hoi
