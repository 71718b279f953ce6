#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hoi/scene.hpp"
#include "hoi/voting.hpp"

namespace hoi {

enum class ApStyle { Continuous };

struct EvalConfig {
  double iou_threshold = 0.5;  // both boxes must exceed this, strictly
  ApStyle ap_style = ApStyle::Continuous;
  // When true, a no-object ground truth only matches predictions that also
  // carry no object; when false the prediction's object slot is ignored.
  bool strict_no_object = true;

  void validate() const;
};

struct VerbAP {
  int verb_id;
  double ap;
  int tp_count;
  int fp_count;
  int gt_count;
};

// Greedy matching of predictions (already sorted by descending score within
// each verb) against one scene's ground truth. A prediction is a true
// positive iff the verb matches, the human IoU strictly exceeds the
// threshold, the object side passes (object IoU above threshold, or both
// sides object-less for no-object verbs) and the ground-truth interaction is
// still unclaimed; each ground truth is claimed at most once, by the
// candidate with the best worst-side IoU. Returns one TP flag per
// prediction. Throws InputError on detection indices out of range.
std::vector<std::uint8_t> match_triplets(const std::vector<TripletScore>& preds,
                                         const GtScene& scene,
                                         const std::vector<InstanceDetection>& detections,
                                         const EvalConfig& cfg);

// Area under the precision-recall curve with the monotone precision
// envelope (all-point interpolation). Entries are (score, is_tp); they are
// stably sorted by descending score internally. gt_count must be positive.
double average_precision(std::vector<std::pair<double, bool>> scored_flags, int gt_count);

// Unweighted mean over verbs present in the ground truth. Throws InputError
// when no verb is evaluable.
double map_role(const std::vector<VerbAP>& per_verb);

struct EvalReport {
  std::vector<VerbAP> per_verb;  // verbs with gt_count > 0, ascending verb_id
  double map_role = 0.0;
};

// Multi-scene evaluation: predictions are matched per scene, then pooled per
// verb across scenes for the AP computation.
EvalReport evaluate(const std::vector<GtScene>& scenes,
                    const std::vector<std::vector<TripletScore>>& triplets_per_scene,
                    const std::vector<std::vector<InstanceDetection>>& detections_per_scene,
                    const VerbSpace& verbs, const EvalConfig& cfg);

}  // namespace hoi
