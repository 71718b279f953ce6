#include "hoi/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hoi/errors.hpp"

namespace hoi {

void Thresholds::validate() const {
  for (double t : {t_u, t_h, t_o}) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ConfigError("thresholds: t_u, t_h, t_o must lie in (0, 1)");
    }
  }
}

bool overlap_flag(const Box& anchor_box, const GtInteraction& it, const GtScene& scene,
                  const Thresholds& th) {
  if (!it.has_object()) {
    throw std::invalid_argument("overlap_flag: interaction has no object box");
  }
  const Box& human = scene.instances[it.human_idx].box;
  const Box& object = scene.instances[it.object_idx].box;
  const Box uni = union_box(human, object);
  return iou(anchor_box, uni) > th.t_u && coverage(anchor_box, human) > th.t_h &&
         coverage(anchor_box, object) > th.t_o;
}

double overlap_level(const Box& anchor_box, const GtInteraction& it, const GtScene& scene) {
  if (!it.has_object()) return 0.0;
  const Box& human = scene.instances[it.human_idx].box;
  const Box& object = scene.instances[it.object_idx].box;
  const Box uni = union_box(human, object);
  return iou(anchor_box, uni) +
         std::sqrt(coverage(anchor_box, human) * coverage(anchor_box, object));
}

std::vector<RegionAssignment> assign_regions(const std::vector<Anchor>& anchors,
                                             const GtScene& scene, const Thresholds& th,
                                             int num_verbs) {
  std::vector<RegionAssignment> out;
  out.reserve(anchors.size());

  std::vector<int> overlapping;
  for (const Anchor& anchor : anchors) {
    RegionAssignment ra;
    ra.anchor_index = anchor.index;
    ra.class_targets.assign(static_cast<std::size_t>(num_verbs), ClassLabel::Negative);

    overlapping.clear();
    int dominant = kNone;
    double best_level = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(scene.interactions.size()); ++i) {
      const GtInteraction& it = scene.interactions[i];
      if (!it.has_object()) continue;
      if (!overlap_flag(anchor.box, it, scene, th)) continue;
      overlapping.push_back(i);
      const double level = overlap_level(anchor.box, it, scene);
      if (level > best_level) {  // strict: ties keep the lowest index
        best_level = level;
        dominant = i;
      }
    }

    if (dominant != kNone) {
      ra.matched_interaction = dominant;
      for (int i : overlapping) {
        if (i != dominant) {
          ra.class_targets[scene.interactions[i].verb_id] = ClassLabel::Ignored;
        }
      }
      // Written last: a verb shared between the dominant and another
      // overlapping interaction stays Positive.
      const GtInteraction& dom = scene.interactions[dominant];
      ra.class_targets[dom.verb_id] = ClassLabel::Positive;
      ra.human_deltas = encode_deltas(anchor.box, scene.instances[dom.human_idx].box);
      ra.object_deltas = encode_deltas(anchor.box, scene.instances[dom.object_idx].box);
    }
    out.push_back(std::move(ra));
  }
  return out;
}

std::vector<InstanceActionTargets> assign_instance_actions(const std::vector<Anchor>& anchors,
                                                           const GtScene& scene,
                                                           const TaskSpec& task,
                                                           double pos_iou) {
  if (!(pos_iou > 0.0 && pos_iou < 1.0)) {
    throw ConfigError("assign_instance_actions: pos_iou must lie in (0, 1)");
  }
  const int num_verbs = task.verbs.num_verbs;
  const auto n = scene.instances.size();

  // Per-instance verb sets, split by which side of the interaction the
  // instance sits on.
  std::vector<std::vector<std::uint8_t>> human_side(n), object_side(n);
  std::vector<std::uint8_t> participates(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    human_side[k].assign(static_cast<std::size_t>(num_verbs), 0);
    object_side[k].assign(static_cast<std::size_t>(num_verbs), 0);
  }
  for (const GtInteraction& it : scene.interactions) {
    participates[it.human_idx] = 1;
    human_side[it.human_idx][it.verb_id] = 1;
    if (it.has_object()) {
      participates[it.object_idx] = 1;
      object_side[it.object_idx][it.verb_id] = 1;
    }
  }

  std::vector<InstanceActionTargets> out;
  out.reserve(anchors.size());
  for (const Anchor& anchor : anchors) {
    InstanceActionTargets t;
    t.anchor_index = anchor.index;

    int best = kNone;
    double best_iou = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double v = iou(anchor.box, scene.instances[k].box);
      if (v > best_iou) {
        best_iou = v;
        best = static_cast<int>(k);
      }
    }
    if (best != kNone && best_iou >= pos_iou && participates[best]) {
      const bool is_human = scene.instances[best].class_id == task.human_class_id;
      t.role = is_human ? AnchorRole::Human : AnchorRole::Object;
      t.action_targets = is_human ? human_side[best] : object_side[best];
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace hoi
