#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hoi/anchors.hpp"
#include "hoi/scene.hpp"

namespace hoi {

// One post-NMS instance detection. action_scores is indexed by the shared
// verb list: for humans it holds the verbs the instance performs, for other
// classes the verbs performed on it.
struct InstanceDetection {
  Box box;
  int class_id;
  double score;
  std::vector<double> action_scores;
};

// Per-anchor interaction prediction: verb scores plus the regressed human
// and object boxes of the interaction the region believes it sees.
struct RegionPrediction {
  int anchor_index;
  std::vector<double> inter_scores;
  Box human_box;
  Box object_box;
};

struct VotingConfig {
  double sigma = 0.9;  // std-dev of the relative object-location distribution
  double t_h = 0.25;   // human coverage gate when matching a region to a human
  double t_o = 0.25;   // object coverage gate when matching a region to an object
  std::optional<double> region_nms_iou;  // ablation mode; disabled when unset
  double score_floor = 1e-6;             // prune triplets scoring below this

  void validate() const;
};

// A scored <human, verb, object> triplet. Scores are unnormalized; only
// relative order within a verb is meaningful. object_det is kNone for
// no-object verbs.
struct TripletScore {
  int human_det;
  int object_det;
  int verb_id;
  double score;
};

// Among detections of the human class whose box is covered by the anchor
// beyond t_h, returns the one maximizing IoU with the anchor (ties go to the
// lowest detection index); nullopt when no human qualifies, in which case
// the region is abandoned.
std::optional<int> match_region_to_human(const Box& anchor_box,
                                         const std::vector<InstanceDetection>& detections,
                                         int human_class_id, double t_h);

// Probability that the matched human's target object sits at
// (object_cx, object_cy): a Gaussian over the offset between the detected
// relative location and the regressed relative location, both scaled by the
// anchor's width and height.
double location_prob(const RegionPrediction& region, const Box& anchor_box,
                     const Box& matched_human_box, double object_cx, double object_cy,
                     double sigma);

// Per-verb location-weighted scores: inter_scores * p, elementwise.
std::vector<double> weighted_loc_score(const RegionPrediction& region, double p);

// Among all detections (humans included) covered by the anchor beyond t_o,
// returns the one whose box center maximizes location_prob (ties go to the
// lowest detection index); nullopt when none qualifies.
std::optional<int> match_region_to_object(const RegionPrediction& region, const Box& anchor_box,
                                          const std::vector<InstanceDetection>& detections,
                                          const Box& matched_human_box, double t_o, double sigma);

using PairKey = std::pair<int, int>;  // (human detection, object detection)
using PairScores = std::map<PairKey, std::vector<double>>;

// Runs both matches for every region and accumulates, per matched
// human-object pair, the sum of the regions' weighted localization scores
// evaluated at the matched object's detected center. Regions failing either
// match contribute to no pair. Accumulation runs in region input order.
PairScores fuse_pairs(const std::vector<RegionPrediction>& regions,
                      const std::vector<Anchor>& anchors,
                      const std::vector<InstanceDetection>& detections,
                      const VotingConfig& cfg, const TaskSpec& task);

// Final scores. With-object verb c of pair (h, o):
//   S = s_h * s_o * (act_h[c] + act_o[c]) * fused[c];
// no-object verb c of human h: S = s_h * act_h[c]. Triplets below
// cfg.score_floor are pruned; output is sorted by (verb, descending score,
// human index, object index).
std::vector<TripletScore> score_triplets(const PairScores& fused,
                                         const std::vector<InstanceDetection>& detections,
                                         const VotingConfig& cfg, const TaskSpec& task);

// Greedy suppression of whole regions keyed on their max verb score;
// regions whose anchor-box IoU with a kept region exceeds iou_threshold are
// dropped. Survivors keep their input order.
std::vector<RegionPrediction> region_nms(const std::vector<RegionPrediction>& regions,
                                         const std::vector<Anchor>& anchors,
                                         double iou_threshold);

// Full inference for one scene: optional region NMS, then pair fusion, then
// triplet scoring. Runtime is linear in the number of matched regions.
// Throws InputError on out-of-range anchor indices or score vectors whose
// length disagrees with the verb list.
std::vector<TripletScore> run_voting(const std::vector<RegionPrediction>& regions,
                                     const std::vector<Anchor>& anchors,
                                     const std::vector<InstanceDetection>& detections,
                                     const VotingConfig& cfg, const TaskSpec& task);

// Rasterized per-verb fused location map for one human detection: the sum of
// weighted localization scores of every region matched to that human,
// evaluated at cell centers on a stride grid. Regions without an object
// match still contribute here.
struct DistributionGrid {
  int rows = 0;
  int cols = 0;
  double cell_stride = 0.0;
  std::vector<double> values;  // row-major

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

DistributionGrid fused_location_grid(const std::vector<RegionPrediction>& regions,
                                     const std::vector<Anchor>& anchors,
                                     const std::vector<InstanceDetection>& detections,
                                     int human_det, int verb_id, double image_width,
                                     double image_height, double cell_stride,
                                     const VotingConfig& cfg, const TaskSpec& task);

}  // namespace hoi
