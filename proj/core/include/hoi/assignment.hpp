#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hoi/anchors.hpp"
#include "hoi/deltas.hpp"
#include "hoi/scene.hpp"

namespace hoi {

// Overlap gates for deciding when an anchor counts as an interaction region.
struct Thresholds {
  double t_u = 0.25;  // IoU with the pair's union box
  double t_h = 0.25;  // fraction of the human box covered
  double t_o = 0.25;  // fraction of the object box covered

  void validate() const;  // each must lie in (0, 1)
};

enum class ClassLabel : std::uint8_t { Negative = 0, Positive = 1, Ignored = 2 };

// Per-anchor training targets. An anchor is foreground iff it passed the
// overlap gate for at least one interaction; exactly one interaction (the
// dominant one) supplies the positive verb label and both regression targets.
struct RegionAssignment {
  int anchor_index = 0;
  int matched_interaction = kNone;
  std::vector<ClassLabel> class_targets;  // one label per verb
  std::optional<Delta4> human_deltas;
  std::optional<Delta4> object_deltas;

  bool foreground() const { return matched_interaction != kNone; }
};

// True iff the anchor clears all three overlap thresholds against the
// interaction: IoU with the union box, covered fraction of the human box,
// covered fraction of the object box — all strict inequalities, so boundary
// equality fails the gate. Throws std::invalid_argument for interactions
// without an object (they never form interaction regions).
bool overlap_flag(const Box& anchor_box, const GtInteraction& it, const GtScene& scene,
                  const Thresholds& th);

// Ranking score used to pick the dominant interaction when several pass the
// gate for one anchor: IoU(anchor, union) + sqrt(cov_human * cov_object).
// Interactions without an object score 0.
double overlap_level(const Box& anchor_box, const GtInteraction& it, const GtScene& scene);

// Full target assignment for one scene. For each anchor: collect the
// interactions passing the overlap gate, pick the dominant one by
// overlap_level (ties go to the lowest interaction index), then label verbs:
// the dominant verb is Positive, verbs carried only by non-dominant
// overlapping interactions are Ignored, everything else is Negative.
// Regression deltas encode the dominant interaction's boxes.
std::vector<RegionAssignment> assign_regions(const std::vector<Anchor>& anchors,
                                             const GtScene& scene, const Thresholds& th,
                                             int num_verbs);

enum class AnchorRole : std::uint8_t { None = 0, Human = 1, Object = 2 };

// Auxiliary action-classification targets for the instance branch.
struct InstanceActionTargets {
  int anchor_index = 0;
  AnchorRole role = AnchorRole::None;
  std::vector<std::uint8_t> action_targets;  // multi-hot over verbs; empty when role is None
};

// An anchor gets a role iff its best-IoU ground-truth instance reaches
// pos_iou (ties on IoU go to the lowest instance index) and that instance
// takes part in at least one interaction. Humans receive the verbs they
// perform, objects the verbs performed on them.
std::vector<InstanceActionTargets> assign_instance_actions(const std::vector<Anchor>& anchors,
                                                           const GtScene& scene,
                                                           const TaskSpec& task,
                                                           double pos_iou = 0.5);

}  // namespace hoi
