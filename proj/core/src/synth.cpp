#include "hoi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hoi/errors.hpp"
#include "hoi/rng.hpp"

namespace hoi {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Box jitter_box(const Box& b, double sigma, std::mt19937_64& eng) {
  if (sigma <= 0.0) return b;
  std::normal_distribution<double> noise(0.0, sigma);
  double x1 = b.x1() + noise(eng);
  double y1 = b.y1() + noise(eng);
  double x2 = b.x2() + noise(eng);
  double y2 = b.y2() + noise(eng);
  if (x2 - x1 < 2.0) {
    const double cx = 0.5 * (x1 + x2);
    x1 = cx - 1.0;
    x2 = cx + 1.0;
  }
  if (y2 - y1 < 2.0) {
    const double cy = 0.5 * (y1 + y2);
    y1 = cy - 1.0;
    y2 = cy + 1.0;
  }
  return Box::from_corners(x1, y1, x2, y2);
}

struct SceneLayout {
  GtScene gt;
  std::vector<std::vector<int>> human_verbs;   // per instance, human-side verbs
  std::vector<std::vector<int>> object_verbs;  // per instance, object-side verbs
};

SceneLayout build_scene(int scene_id, const SynthConfig& synth, const TaskSpec& task,
                        double width, double height, std::mt19937_64& eng) {
  SceneLayout layout;
  GtScene& gt = layout.gt;
  gt.scene_id = scene_id;
  gt.width = width;
  gt.height = height;

  std::uniform_int_distribution<int> humans_dist(synth.humans_min, synth.humans_max);
  std::uniform_int_distribution<int> objects_dist(synth.objects_min, synth.objects_max);
  const int num_humans = humans_dist(eng);
  const int num_objects = objects_dist(eng);

  // One human per cell of a coarse grid; everything a human interacts with
  // stays well inside its cell so interactions of different humans never
  // compete for the same anchors.
  const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_humans))));
  const double cell_w = width / grid;
  const double cell_h = height / grid;

  std::vector<int> cells(static_cast<std::size_t>(grid) * grid);
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), eng);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> human_centers;
  for (int i = 0; i < num_humans; ++i) {
    const int cell = cells[i];
    const double cx0 = (cell % grid + 0.5) * cell_w;
    const double cy0 = (cell / grid + 0.5) * cell_h;
    const double cx = cx0 + (unit(eng) - 0.5) * 0.20 * cell_w;
    const double cy = cy0 + (unit(eng) - 0.5) * 0.20 * cell_h;
    const double w = (0.20 + 0.10 * unit(eng)) * cell_w;
    const double h = (0.22 + 0.10 * unit(eng)) * cell_h;
    gt.instances.push_back(GtInstance{Box(cx, cy, w, h), task.human_class_id});
    human_centers.emplace_back(cx, cy);
  }

  // Objects take angular slots around their host human: distinct directions
  // keep object centers apart, which keeps per-interaction anchor sets and
  // location offsets distinguishable.
  std::vector<int> slots_used(num_humans, 0);
  std::uniform_int_distribution<int> class_dist(0, task.num_classes - 1);
  std::uniform_int_distribution<int> verb_dist(0, task.verbs.with_object_count() - 1);
  for (int j = 0; j < num_objects; ++j) {
    const int host = j % num_humans;
    const int slot = slots_used[host]++;
    const double angle =
        (slot + 0.15 + 0.7 * unit(eng)) * (2.0 * std::numbers::pi / 4.0);
    const double radius = (0.11 + 0.07 * unit(eng)) * std::min(cell_w, cell_h);
    const double cx = human_centers[host].first + radius * std::cos(angle);
    const double cy = human_centers[host].second + radius * std::sin(angle);
    const double w = (0.08 + 0.08 * unit(eng)) * cell_w;
    const double h = (0.08 + 0.08 * unit(eng)) * cell_h;
    int class_id = class_dist(eng);
    if (class_id == task.human_class_id) {
      class_id = (class_id + 1) % task.num_classes;
      if (task.num_classes == 1) {
        throw ConfigError("gen_synth: need at least two instance classes for objects");
      }
    }
    gt.instances.push_back(GtInstance{Box(cx, cy, w, h), class_id});
    gt.interactions.push_back(
        GtInteraction{host, num_humans + j, verb_dist(eng)});
  }

  if (task.verbs.num_no_object > 0) {
    std::uniform_int_distribution<int> no_obj_dist(task.verbs.with_object_count(),
                                                   task.verbs.num_verbs - 1);
    for (int i = 0; i < num_humans; ++i) {
      if (unit(eng) < 0.5) {
        gt.interactions.push_back(GtInteraction{i, kNone, no_obj_dist(eng)});
      }
    }
  }

  // Clip into the image, matching file-ingest semantics.
  for (GtInstance& inst : gt.instances) {
    const Box& b = inst.box;
    inst.box = Box::from_corners(std::clamp(b.x1(), 0.0, width), std::clamp(b.y1(), 0.0, height),
                                 std::clamp(b.x2(), 0.0, width), std::clamp(b.y2(), 0.0, height));
  }

  layout.human_verbs.resize(gt.instances.size());
  layout.object_verbs.resize(gt.instances.size());
  for (const GtInteraction& it : gt.interactions) {
    layout.human_verbs[it.human_idx].push_back(it.verb_id);
    if (it.has_object()) layout.object_verbs[it.object_idx].push_back(it.verb_id);
  }
  return layout;
}

}  // namespace

SynthOutput gen_synth(const SynthConfig& synth, const TaskSpec& task,
                      const AnchorConfig& anchor_cfg, const Thresholds& thresholds,
                      std::uint64_t seed) {
  synth.validate();
  if (task.verbs.with_object_count() <= 0) {
    throw ConfigError("gen_synth: need at least one with-object verb");
  }

  const std::vector<Anchor> anchors = generate_anchors(anchor_cfg);
  const int num_verbs = task.verbs.num_verbs;

  SynthOutput out;
  out.scenes.reserve(static_cast<std::size_t>(synth.scene_count));

  for (int s = 0; s < synth.scene_count; ++s) {
    auto eng = make_engine(seed, static_cast<std::uint64_t>(s));
    SceneBundle bundle;
    SceneLayout layout = build_scene(s, synth, task, anchor_cfg.image_width,
                                     anchor_cfg.image_height, eng);
    bundle.gt = std::move(layout.gt);
    const GtScene& gt = bundle.gt;

    std::normal_distribution<double> score_noise(0.0, 1.0);
    const double ss = synth.score_noise_sigma;
    auto positive_score = [&]() {
      return ss > 0.0 ? clamp01(1.0 - std::abs(score_noise(eng) * ss)) : 1.0;
    };
    auto negative_score = [&]() {
      return ss > 0.0 ? clamp01(std::abs(score_noise(eng) * ss * 0.25)) : 0.0;
    };

    // Detections carry a quarter of the box noise: they stand in for the
    // frozen pretrained instance detector, while the full noise goes to the
    // interaction branches' regressed boxes below.
    const double det_noise = 0.25 * synth.box_noise_sigma;
    for (std::size_t k = 0; k < gt.instances.size(); ++k) {
      const GtInstance& inst = gt.instances[k];
      InstanceDetection det{jitter_box(inst.box, det_noise, eng), inst.class_id,
                            positive_score(), std::vector<double>()};
      det.action_scores.assign(static_cast<std::size_t>(num_verbs), 0.0);
      const auto& verbs = inst.class_id == task.human_class_id ? layout.human_verbs[k]
                                                               : layout.object_verbs[k];
      for (int c = 0; c < num_verbs; ++c) det.action_scores[c] = negative_score();
      for (int v : verbs) det.action_scores[v] = positive_score();
      bundle.detections.push_back(std::move(det));
    }

    // Region predictions for every anchor passing the overlap gate.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const Anchor& anchor : anchors) {
      int dominant = kNone;
      double best_level = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(gt.interactions.size()); ++i) {
        const GtInteraction& it = gt.interactions[i];
        if (!it.has_object()) continue;
        if (!overlap_flag(anchor.box, it, gt, thresholds)) continue;
        ++bundle.flagged_pair_count;
        const double level = overlap_level(anchor.box, it, gt);
        if (level > best_level) {
          best_level = level;
          dominant = i;
        }
      }
      if (dominant == kNone) continue;
      bundle.matched_anchors.emplace_back(anchor.index, dominant);
      if (synth.drop_rate > 0.0 && unit(eng) < synth.drop_rate) continue;

      const GtInteraction& it = gt.interactions[dominant];
      RegionPrediction region{anchor.index, std::vector<double>(),
                              jitter_box(gt.instances[it.human_idx].box, synth.box_noise_sigma, eng),
                              jitter_box(gt.instances[it.object_idx].box, synth.box_noise_sigma, eng)};
      region.inter_scores.assign(static_cast<std::size_t>(num_verbs), 0.0);
      for (int c = 0; c < num_verbs; ++c) region.inter_scores[c] = negative_score();
      region.inter_scores[it.verb_id] = positive_score();
      bundle.regions.push_back(std::move(region));
    }

    out.flagged_pair_count += bundle.flagged_pair_count;
    out.scenes.push_back(std::move(bundle));
  }
  return out;
}

}  // namespace hoi
