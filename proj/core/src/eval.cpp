#include "hoi/eval.hpp"

#include <algorithm>
#include <string>

#include "hoi/errors.hpp"

namespace hoi {

void EvalConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw ConfigError("eval: iou_threshold must lie in (0, 1)");
  }
}

std::vector<std::uint8_t> match_triplets(const std::vector<TripletScore>& preds,
                                         const GtScene& scene,
                                         const std::vector<InstanceDetection>& detections,
                                         const EvalConfig& cfg) {
  const auto num_dets = static_cast<int>(detections.size());
  std::vector<std::uint8_t> flags(preds.size(), 0);
  std::vector<std::uint8_t> claimed(scene.interactions.size(), 0);

  for (std::size_t i = 0; i < preds.size(); ++i) {
    const TripletScore& pred = preds[i];
    if (pred.human_det < 0 || pred.human_det >= num_dets) {
      throw InputError("prediction references missing human detection index " +
                       std::to_string(pred.human_det));
    }
    if (pred.object_det != kNone && (pred.object_det < 0 || pred.object_det >= num_dets)) {
      throw InputError("prediction references missing object detection index " +
                       std::to_string(pred.object_det));
    }

    int best_gt = kNone;
    double best_quality = -1.0;
    for (std::size_t g = 0; g < scene.interactions.size(); ++g) {
      const GtInteraction& gt = scene.interactions[g];
      if (claimed[g] || gt.verb_id != pred.verb_id) continue;

      const double iou_h =
          iou(detections[pred.human_det].box, scene.instances[gt.human_idx].box);
      if (!(iou_h > cfg.iou_threshold)) continue;

      double quality = iou_h;
      if (gt.has_object()) {
        if (pred.object_det == kNone) continue;
        const double iou_o =
            iou(detections[pred.object_det].box, scene.instances[gt.object_idx].box);
        if (!(iou_o > cfg.iou_threshold)) continue;
        quality = std::min(iou_h, iou_o);
      } else if (cfg.strict_no_object && pred.object_det != kNone) {
        continue;
      }

      if (quality > best_quality) {
        best_quality = quality;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt != kNone) {
      claimed[best_gt] = 1;
      flags[i] = 1;
    }
  }
  return flags;
}

double average_precision(std::vector<std::pair<double, bool>> scored_flags, int gt_count) {
  if (gt_count <= 0) {
    throw std::invalid_argument("average_precision: gt_count must be positive");
  }
  if (scored_flags.empty()) return 0.0;

  std::stable_sort(scored_flags.begin(), scored_flags.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  const auto n = scored_flags.size();
  std::vector<double> precision(n);
  int tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (scored_flags[k].second) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  // Monotone envelope from the right, then sum precision at each recall step.
  for (std::size_t k = n - 1; k-- > 0;) {
    precision[k] = std::max(precision[k], precision[k + 1]);
  }
  double ap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (scored_flags[k].second) ap += precision[k] / static_cast<double>(gt_count);
  }
  return ap;
}

double map_role(const std::vector<VerbAP>& per_verb) {
  double sum = 0.0;
  int included = 0;
  for (const VerbAP& v : per_verb) {
    if (v.gt_count > 0) {
      sum += v.ap;
      ++included;
    }
  }
  if (included == 0) throw InputError("map_role: no verb has ground truth to evaluate");
  return sum / included;
}

EvalReport evaluate(const std::vector<GtScene>& scenes,
                    const std::vector<std::vector<TripletScore>>& triplets_per_scene,
                    const std::vector<std::vector<InstanceDetection>>& detections_per_scene,
                    const VerbSpace& verbs, const EvalConfig& cfg) {
  cfg.validate();
  if (scenes.size() != triplets_per_scene.size() ||
      scenes.size() != detections_per_scene.size()) {
    throw InputError("evaluate: scene, triplet and detection lists differ in length");
  }

  std::vector<std::vector<std::pair<double, bool>>> pooled(
      static_cast<std::size_t>(verbs.num_verbs));
  std::vector<int> gt_counts(static_cast<std::size_t>(verbs.num_verbs), 0);

  for (std::size_t s = 0; s < scenes.size(); ++s) {
    // Descending score within each verb, stable across equal scores.
    std::vector<TripletScore> preds = triplets_per_scene[s];
    std::stable_sort(preds.begin(), preds.end(), [](const TripletScore& a, const TripletScore& b) {
      if (a.verb_id != b.verb_id) return a.verb_id < b.verb_id;
      return a.score > b.score;
    });
    for (const TripletScore& p : preds) {
      if (p.verb_id < 0 || p.verb_id >= verbs.num_verbs) {
        throw InputError("evaluate: prediction verb_id out of range");
      }
    }
    const auto flags = match_triplets(preds, scenes[s], detections_per_scene[s], cfg);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      pooled[preds[i].verb_id].emplace_back(preds[i].score, flags[i] != 0);
    }
    for (const GtInteraction& gt : scenes[s].interactions) ++gt_counts[gt.verb_id];
  }

  EvalReport report;
  for (int v = 0; v < verbs.num_verbs; ++v) {
    if (gt_counts[v] == 0) continue;
    VerbAP ap{};
    ap.verb_id = v;
    ap.gt_count = gt_counts[v];
    for (const auto& [score, is_tp] : pooled[v]) {
      if (is_tp) {
        ++ap.tp_count;
      } else {
        ++ap.fp_count;
      }
    }
    ap.ap = average_precision(pooled[v], gt_counts[v]);
    report.per_verb.push_back(ap);
  }
  report.map_role = map_role(report.per_verb);
  return report;
}

}  // namespace hoi
