#include "hoi/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hoi/errors.hpp"

namespace hoi {

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_shapes(const Matrix& logits, int rows, int cols, const char* what) {
  if (logits.rows != rows || logits.cols != cols) {
    throw std::invalid_argument(std::string(what) + ": logits shape does not match targets");
  }
}

enum class CellKind { Skip, Positive, Negative };

// Shared core of the three classification variants: each maps a cell's label
// to Skip / Positive / Negative; the normalizer is always the count of
// original Positive cells on foreground anchors (floor 1) so variants stay
// comparable cell by cell.
template <typename CellPolicy>
LossResult reduce_cells(const Matrix& logits, const ClassTargets& t, const LossConfig& cfg,
                        CellPolicy&& policy) {
  LossResult res;
  res.grad = Matrix(t.num_anchors, t.num_classes);

  int positives = 0;
  for (int a = 0; a < t.num_anchors; ++a) {
    if (!t.foreground[a]) continue;
    for (int c = 0; c < t.num_classes; ++c) {
      if (t.label(a, c) == ClassLabel::Positive) ++positives;
    }
  }
  const double norm = std::max(1, positives);

  double sum = 0.0;
  for (int a = 0; a < t.num_anchors; ++a) {
    for (int c = 0; c < t.num_classes; ++c) {
      const CellKind kind = policy(t.foreground[a] != 0, t.label(a, c));
      if (kind == CellKind::Skip) continue;
      const FocalTerm ft = focal_term(logits.at(a, c), kind == CellKind::Positive, cfg);
      sum += ft.loss;
      res.grad.at(a, c) = ft.dloss_dlogit / norm;
    }
  }
  res.value = sum / norm;
  return res;
}

}  // namespace

void LossConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("loss: alpha must lie in (0, 1)");
  if (!(gamma >= 0.0)) throw ConfigError("loss: gamma must be non-negative");
  if (!(smooth_l1_beta > 0.0)) throw ConfigError("loss: smooth_l1_beta must be positive");
}

ClassTargets ClassTargets::from_assignments(const std::vector<RegionAssignment>& assignments,
                                            int num_classes) {
  ClassTargets t;
  t.num_anchors = static_cast<int>(assignments.size());
  t.num_classes = num_classes;
  t.labels.assign(static_cast<std::size_t>(t.num_anchors) * num_classes, ClassLabel::Negative);
  t.foreground.assign(assignments.size(), 0);
  for (int a = 0; a < t.num_anchors; ++a) {
    const RegionAssignment& ra = assignments[a];
    if (!ra.foreground()) continue;
    t.foreground[a] = 1;
    if (static_cast<int>(ra.class_targets.size()) != num_classes) {
      throw std::invalid_argument("ClassTargets: assignment verb count mismatch");
    }
    std::copy(ra.class_targets.begin(), ra.class_targets.end(),
              t.labels.begin() + static_cast<std::size_t>(a) * num_classes);
  }
  return t;
}

FocalTerm focal_term(double logit, bool positive, const LossConfig& cfg) {
  if (!std::isfinite(logit)) throw std::domain_error("focal_term: non-finite logit");
  const double p = sigmoid(logit);
  const double q = sigmoid(-logit);  // 1 - p without cancellation
  if (positive) {
    const double log_p = -softplus(-logit);
    const double mod = std::pow(q, cfg.gamma);
    const double loss = -cfg.alpha * mod * log_p;
    const double grad = cfg.alpha * (cfg.gamma * p * mod * log_p - mod * q);
    return FocalTerm{loss, grad};
  }
  const double log_q = -softplus(logit);
  const double mod = std::pow(p, cfg.gamma);
  const double loss = -(1.0 - cfg.alpha) * mod * log_q;
  const double grad = (1.0 - cfg.alpha) * (mod * p - cfg.gamma * mod * q * log_q);
  return FocalTerm{loss, grad};
}

LossResult ignorance_loss(const Matrix& logits, const ClassTargets& t, const LossConfig& cfg) {
  check_shapes(logits, t.num_anchors, t.num_classes, "ignorance_loss");
  return reduce_cells(logits, t, cfg, [](bool fg, ClassLabel label) {
    if (!fg || label == ClassLabel::Ignored) return CellKind::Skip;
    return label == ClassLabel::Positive ? CellKind::Positive : CellKind::Negative;
  });
}

LossResult focal_loss_all(const Matrix& logits, const ClassTargets& t, const LossConfig& cfg) {
  check_shapes(logits, t.num_anchors, t.num_classes, "focal_loss_all");
  return reduce_cells(logits, t, cfg, [](bool fg, ClassLabel label) {
    return (fg && label == ClassLabel::Positive) ? CellKind::Positive : CellKind::Negative;
  });
}

LossResult foreground_loss(const Matrix& logits, const ClassTargets& t, const LossConfig& cfg) {
  check_shapes(logits, t.num_anchors, t.num_classes, "foreground_loss");
  return reduce_cells(logits, t, cfg, [](bool fg, ClassLabel label) {
    if (!fg) return CellKind::Skip;
    return label == ClassLabel::Negative ? CellKind::Negative : CellKind::Positive;
  });
}

LossResult classification_loss(const Matrix& logits, const ClassTargets& t,
                               const LossConfig& cfg) {
  switch (cfg.variant) {
    case LossVariant::Ignorance:
      return ignorance_loss(logits, t, cfg);
    case LossVariant::Focal:
      return focal_loss_all(logits, t, cfg);
    case LossVariant::Foreground:
      return foreground_loss(logits, t, cfg);
  }
  throw ConfigError("classification_loss: unknown variant");
}

LossResult smooth_l1(const Matrix& pred, const Matrix& target, double beta) {
  if (pred.rows != target.rows || pred.cols != target.cols) {
    throw std::invalid_argument("smooth_l1: shape mismatch");
  }
  if (!(beta > 0.0)) throw ConfigError("smooth_l1: beta must be positive");

  LossResult res;
  res.grad = Matrix(pred.rows, pred.cols);
  const double norm = std::max(1, pred.rows);
  double sum = 0.0;
  for (int r = 0; r < pred.rows; ++r) {
    for (int c = 0; c < pred.cols; ++c) {
      const double d = pred.at(r, c) - target.at(r, c);
      const double ad = std::abs(d);
      if (ad < beta) {
        sum += 0.5 * d * d / beta;
        res.grad.at(r, c) = d / beta / norm;
      } else {
        sum += ad - 0.5 * beta;
        res.grad.at(r, c) = (d > 0.0 ? 1.0 : -1.0) / norm;
      }
    }
  }
  res.value = sum / norm;
  return res;
}

ActionTargets ActionTargets::from_instance_actions(
    const std::vector<InstanceActionTargets>& actions, int num_classes) {
  ActionTargets t;
  t.num_classes = num_classes;
  for (const auto& a : actions) {
    if (a.role == AnchorRole::None) continue;
    if (static_cast<int>(a.action_targets.size()) != num_classes) {
      throw std::invalid_argument("ActionTargets: action vector length mismatch");
    }
    t.targets.insert(t.targets.end(), a.action_targets.begin(), a.action_targets.end());
    ++t.num_rows;
  }
  return t;
}

LossResult instance_action_bce(const Matrix& logits, const ActionTargets& t) {
  check_shapes(logits, t.num_rows, t.num_classes, "instance_action_bce");
  LossResult res;
  res.grad = Matrix(t.num_rows, t.num_classes);
  const std::size_t cells = t.targets.size();
  if (cells == 0) return res;

  double sum = 0.0;
  for (int r = 0; r < t.num_rows; ++r) {
    for (int c = 0; c < t.num_classes; ++c) {
      const double x = logits.at(r, c);
      const double y = t.targets[static_cast<std::size_t>(r) * t.num_classes + c] ? 1.0 : 0.0;
      sum += softplus(x) - y * x;
      res.grad.at(r, c) = (sigmoid(x) - y) / static_cast<double>(cells);
    }
  }
  res.value = sum / static_cast<double>(cells);
  return res;
}

double total_loss(double reg_h, double reg_o, double cls_inter, double cls_inst) {
  return reg_h + reg_o + cls_inter + cls_inst;
}

}  // namespace hoi
