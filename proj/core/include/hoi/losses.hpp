#pragma once

#include <cstdint>
#include <vector>

#include "hoi/assignment.hpp"

namespace hoi {

enum class LossVariant { Ignorance, Focal, Foreground };

struct LossConfig {
  double alpha = 0.25;
  double gamma = 2.0;
  double smooth_l1_beta = 0.1;
  LossVariant variant = LossVariant::Ignorance;

  void validate() const;  // alpha in (0,1), gamma >= 0, beta > 0
};

// Minimal dense row-major matrix; just enough for logits and gradients.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows(rows), cols(cols), data(static_cast<std::size_t>(rows) * cols, fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Per-anchor, per-verb labels plus the foreground mask, flattened out of the
// assignment structs so the losses can run on any target source.
struct ClassTargets {
  int num_anchors = 0;
  int num_classes = 0;
  std::vector<ClassLabel> labels;        // row-major anchors x classes
  std::vector<std::uint8_t> foreground;  // per anchor

  ClassLabel label(int a, int c) const {
    return labels[static_cast<std::size_t>(a) * num_classes + c];
  }

  static ClassTargets from_assignments(const std::vector<RegionAssignment>& assignments,
                                       int num_classes);
};

struct FocalTerm {
  double loss;
  double dloss_dlogit;
};

// One focal cell evaluated from the logit. The probability is the sigmoid of
// the logit, computed through softplus so both the value and the derivative
// stay finite for any finite logit. Throws std::domain_error on a non-finite
// logit.
FocalTerm focal_term(double logit, bool positive, const LossConfig& cfg);

struct LossResult {
  double value = 0.0;
  Matrix grad;
};

// Classification loss restricted to foreground anchors with Ignored cells
// masked out: background anchors and Ignored cells contribute exactly zero
// to both the value and the gradient. Normalized by the Positive cell count
// (floor 1). Shape mismatch throws std::invalid_argument.
LossResult ignorance_loss(const Matrix& logits, const ClassTargets& targets,
                          const LossConfig& cfg);

// Plain focal baseline: every anchor contributes, background anchors as
// all-Negative, Ignored cells as Negative.
LossResult focal_loss_all(const Matrix& logits, const ClassTargets& targets,
                          const LossConfig& cfg);

// Foreground baseline: only foreground anchors contribute and Ignored cells
// are promoted to Positive (multi-hot over all overlapping interactions).
LossResult foreground_loss(const Matrix& logits, const ClassTargets& targets,
                           const LossConfig& cfg);

// Dispatches on cfg.variant.
LossResult classification_loss(const Matrix& logits, const ClassTargets& targets,
                               const LossConfig& cfg);

// Smooth L1 over regression deltas of matched anchors (one row per matched
// anchor, 4 columns). Summed per coordinate, normalized by the matched-anchor
// count (floor 1).
LossResult smooth_l1(const Matrix& pred_deltas, const Matrix& target_deltas, double beta);

// Binary targets for the instance action branch, one row per participating
// anchor (role != None).
struct ActionTargets {
  int num_rows = 0;
  int num_classes = 0;
  std::vector<std::uint8_t> targets;  // row-major

  static ActionTargets from_instance_actions(const std::vector<InstanceActionTargets>& actions,
                                             int num_classes);
};

// Mean multi-label binary cross-entropy over participating cells.
LossResult instance_action_bce(const Matrix& logits, const ActionTargets& targets);

// Plain unweighted sum of the four branch losses.
double total_loss(double reg_h, double reg_o, double cls_inter, double cls_inst);

}  // namespace hoi
