#include "hoi/voting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hoi/errors.hpp"

namespace hoi {

void VotingConfig::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("voting: sigma must be positive");
  if (!(t_h > 0.0 && t_h < 1.0) || !(t_o > 0.0 && t_o < 1.0)) {
    throw ConfigError("voting: t_h and t_o must lie in (0, 1)");
  }
  if (region_nms_iou && !(*region_nms_iou > 0.0)) {
    throw ConfigError("voting: region_nms_iou must be positive when set");
  }
  if (score_floor < 0.0) throw ConfigError("voting: score_floor must be non-negative");
}

std::optional<int> match_region_to_human(const Box& anchor_box,
                                         const std::vector<InstanceDetection>& detections,
                                         int human_class_id, double t_h) {
  std::optional<int> best;
  double best_iou = -1.0;
  for (int k = 0; k < static_cast<int>(detections.size()); ++k) {
    const InstanceDetection& det = detections[k];
    if (det.class_id != human_class_id) continue;
    if (!(coverage(anchor_box, det.box) > t_h)) continue;
    const double v = iou(anchor_box, det.box);
    if (v > best_iou) {  // strict: ties keep the lowest index
      best_iou = v;
      best = k;
    }
  }
  return best;
}

double location_prob(const RegionPrediction& region, const Box& anchor_box,
                     const Box& matched_human_box, double object_cx, double object_cy,
                     double sigma) {
  const double vx = (object_cx - matched_human_box.cx) / anchor_box.w;
  const double vy = (object_cy - matched_human_box.cy) / anchor_box.h;
  const double mu_x = (region.object_box.cx - region.human_box.cx) / anchor_box.w;
  const double mu_y = (region.object_box.cy - region.human_box.cy) / anchor_box.h;
  const double dx = vx - mu_x;
  const double dy = vy - mu_y;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

std::vector<double> weighted_loc_score(const RegionPrediction& region, double p) {
  std::vector<double> out(region.inter_scores.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = region.inter_scores[c] * p;
  return out;
}

std::optional<int> match_region_to_object(const RegionPrediction& region, const Box& anchor_box,
                                          const std::vector<InstanceDetection>& detections,
                                          const Box& matched_human_box, double t_o,
                                          double sigma) {
  std::optional<int> best;
  double best_p = -1.0;
  for (int k = 0; k < static_cast<int>(detections.size()); ++k) {
    const InstanceDetection& det = detections[k];
    if (!(coverage(anchor_box, det.box) > t_o)) continue;
    const double p =
        location_prob(region, anchor_box, matched_human_box, det.box.cx, det.box.cy, sigma);
    if (p > best_p) {  // strict: ties keep the lowest index
      best_p = p;
      best = k;
    }
  }
  return best;
}

namespace {

const Anchor& anchor_for(const RegionPrediction& region, const std::vector<Anchor>& anchors) {
  if (region.anchor_index < 0 || region.anchor_index >= static_cast<int>(anchors.size())) {
    throw InputError("region prediction references anchor_index " +
                     std::to_string(region.anchor_index) + ", valid range is [0, " +
                     std::to_string(anchors.size()) + ")");
  }
  return anchors[region.anchor_index];
}

void check_scene_inputs(const std::vector<RegionPrediction>& regions,
                        const std::vector<InstanceDetection>& detections,
                        const TaskSpec& task) {
  const auto num_verbs = static_cast<std::size_t>(task.verbs.num_verbs);
  for (const auto& region : regions) {
    if (region.inter_scores.size() != num_verbs) {
      throw InputError("region prediction at anchor_index " +
                       std::to_string(region.anchor_index) + " carries " +
                       std::to_string(region.inter_scores.size()) + " verb scores, expected " +
                       std::to_string(num_verbs));
    }
  }
  for (std::size_t k = 0; k < detections.size(); ++k) {
    if (detections[k].action_scores.size() != num_verbs) {
      throw InputError("detection " + std::to_string(k) + " carries " +
                       std::to_string(detections[k].action_scores.size()) +
                       " action scores, expected " + std::to_string(num_verbs));
    }
  }
}

}  // namespace

PairScores fuse_pairs(const std::vector<RegionPrediction>& regions,
                      const std::vector<Anchor>& anchors,
                      const std::vector<InstanceDetection>& detections,
                      const VotingConfig& cfg, const TaskSpec& task) {
  PairScores fused;
  for (const RegionPrediction& region : regions) {
    const Anchor& anchor = anchor_for(region, anchors);
    const auto h = match_region_to_human(anchor.box, detections, task.human_class_id, cfg.t_h);
    if (!h) continue;  // abandoned
    const Box& human_box = detections[*h].box;
    const auto o =
        match_region_to_object(region, anchor.box, detections, human_box, cfg.t_o, cfg.sigma);
    if (!o) continue;  // no qualifying object, dropped from pair scoring
    const Box& object_box = detections[*o].box;
    const double p =
        location_prob(region, anchor.box, human_box, object_box.cx, object_box.cy, cfg.sigma);
    auto& acc = fused[PairKey{*h, *o}];
    if (acc.empty()) acc.assign(region.inter_scores.size(), 0.0);
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += region.inter_scores[c] * p;
  }
  return fused;
}

std::vector<TripletScore> score_triplets(const PairScores& fused,
                                         const std::vector<InstanceDetection>& detections,
                                         const VotingConfig& cfg, const TaskSpec& task) {
  std::vector<TripletScore> out;
  const int with_object = task.verbs.with_object_count();

  for (const auto& [key, scores] : fused) {
    const InstanceDetection& human = detections[key.first];
    const InstanceDetection& object = detections[key.second];
    for (int c = 0; c < with_object; ++c) {
      const double s = human.score * object.score *
                       (human.action_scores[c] + object.action_scores[c]) * scores[c];
      if (s >= cfg.score_floor) {
        out.push_back(TripletScore{key.first, key.second, c, s});
      }
    }
  }
  for (int c = with_object; c < task.verbs.num_verbs; ++c) {
    for (int k = 0; k < static_cast<int>(detections.size()); ++k) {
      const InstanceDetection& det = detections[k];
      if (det.class_id != task.human_class_id) continue;
      const double s = det.score * det.action_scores[c];
      if (s >= cfg.score_floor) {
        out.push_back(TripletScore{k, kNone, c, s});
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const TripletScore& a, const TripletScore& b) {
    if (a.verb_id != b.verb_id) return a.verb_id < b.verb_id;
    if (a.score != b.score) return a.score > b.score;
    if (a.human_det != b.human_det) return a.human_det < b.human_det;
    return a.object_det < b.object_det;
  });
  return out;
}

std::vector<RegionPrediction> region_nms(const std::vector<RegionPrediction>& regions,
                                         const std::vector<Anchor>& anchors,
                                         double iou_threshold) {
  const auto n = regions.size();
  std::vector<double> keys(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = regions[i].inter_scores;
    keys[i] = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    return regions[a].anchor_index < regions[b].anchor_index;
  });

  std::vector<char> suppressed(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = order[i];
    if (suppressed[a]) continue;
    const Box& box_a = anchor_for(regions[a], anchors).box;
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t b = order[j];
      if (suppressed[b]) continue;
      if (iou(box_a, anchor_for(regions[b], anchors).box) > iou_threshold) {
        suppressed[b] = 1;
      }
    }
  }

  std::vector<RegionPrediction> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!suppressed[i]) kept.push_back(regions[i]);
  }
  return kept;
}

std::vector<TripletScore> run_voting(const std::vector<RegionPrediction>& regions,
                                     const std::vector<Anchor>& anchors,
                                     const std::vector<InstanceDetection>& detections,
                                     const VotingConfig& cfg, const TaskSpec& task) {
  cfg.validate();
  check_scene_inputs(regions, detections, task);
  for (const auto& region : regions) anchor_for(region, anchors);

  if (cfg.region_nms_iou) {
    const auto kept = region_nms(regions, anchors, *cfg.region_nms_iou);
    return score_triplets(fuse_pairs(kept, anchors, detections, cfg, task), detections, cfg,
                          task);
  }
  return score_triplets(fuse_pairs(regions, anchors, detections, cfg, task), detections, cfg,
                        task);
}

DistributionGrid fused_location_grid(const std::vector<RegionPrediction>& regions,
                                     const std::vector<Anchor>& anchors,
                                     const std::vector<InstanceDetection>& detections,
                                     int human_det, int verb_id, double image_width,
                                     double image_height, double cell_stride,
                                     const VotingConfig& cfg, const TaskSpec& task) {
  if (human_det < 0 || human_det >= static_cast<int>(detections.size())) {
    throw InputError("fused_location_grid: human detection index out of range");
  }
  if (verb_id < 0 || verb_id >= task.verbs.num_verbs) {
    throw InputError("fused_location_grid: verb_id out of range");
  }
  if (!(cell_stride > 0.0)) throw ConfigError("fused_location_grid: stride must be positive");

  DistributionGrid grid;
  grid.cell_stride = cell_stride;
  grid.cols = static_cast<int>(std::ceil(image_width / cell_stride));
  grid.rows = static_cast<int>(std::ceil(image_height / cell_stride));
  grid.values.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0.0);

  const Box& human_box = detections[human_det].box;
  for (const RegionPrediction& region : regions) {
    const Anchor& anchor = anchor_for(region, anchors);
    const auto h = match_region_to_human(anchor.box, detections, task.human_class_id, cfg.t_h);
    if (!h || *h != human_det) continue;
    const double verb_score = region.inter_scores[verb_id];
    for (int r = 0; r < grid.rows; ++r) {
      const double y = cell_stride * (r + 0.5);
      for (int c = 0; c < grid.cols; ++c) {
        const double x = cell_stride * (c + 0.5);
        grid.values[static_cast<std::size_t>(r) * grid.cols + c] +=
            verb_score * location_prob(region, anchor.box, human_box, x, y, cfg.sigma);
      }
    }
  }
  return grid;
}

}  // namespace hoi
