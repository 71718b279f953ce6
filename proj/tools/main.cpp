#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hoi/config.hpp"
#include "hoi/errors.hpp"
#include "hoi/eval.hpp"
#include "hoi/harness.hpp"
#include "hoi/io.hpp"
#include "hoi/losses.hpp"
#include "hoi/rng.hpp"
#include "hoi/synth.hpp"

namespace {

using namespace hoi;

// Every RunConfig field has a flag; flags override the config file.
struct CommonOptions {
  std::string config_path;
  std::optional<double> t_u, t_h, t_o;
  std::optional<double> sigma, nms_iou, score_floor;
  std::optional<double> iou_threshold;
  std::optional<bool> strict_no_object;
  std::optional<double> alpha, gamma, smooth_l1_beta;
  std::optional<std::string> loss_variant;
  std::optional<int> num_verbs, num_no_object_verbs, human_class_id, num_classes;
  std::optional<double> image_width, image_height;
  std::optional<std::string> anchor_levels, anchor_scales, anchor_ratios;
  std::optional<bool> clip_anchors;
  std::optional<int> humans_min, humans_max, objects_min, objects_max;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "run configuration file (JSON)");
  cmd->add_option("--t-u", opts.t_u, "union-box IoU threshold");
  cmd->add_option("--t-h", opts.t_h, "human coverage threshold");
  cmd->add_option("--t-o", opts.t_o, "object coverage threshold");
  cmd->add_option("--sigma", opts.sigma, "location distribution standard deviation");
  cmd->add_option("--nms-iou", opts.nms_iou,
                  "region NMS IoU threshold (>= 1 disables suppression)");
  cmd->add_option("--score-floor", opts.score_floor, "prune triplets scoring below this");
  cmd->add_option("--iou-threshold", opts.iou_threshold, "evaluation IoU threshold");
  cmd->add_option("--strict-no-object", opts.strict_no_object,
                  "no-object ground truth matches only object-less predictions");
  cmd->add_option("--alpha", opts.alpha, "focal alpha");
  cmd->add_option("--gamma", opts.gamma, "focal gamma");
  cmd->add_option("--smooth-l1-beta", opts.smooth_l1_beta, "smooth L1 crossover");
  cmd->add_option("--loss-variant", opts.loss_variant, "ignorance | focal | foreground");
  cmd->add_option("--num-verbs", opts.num_verbs, "size of the shared verb list");
  cmd->add_option("--num-no-object-verbs", opts.num_no_object_verbs,
                  "trailing verbs without a target object");
  cmd->add_option("--human-class-id", opts.human_class_id, "instance class id meaning human");
  cmd->add_option("--num-classes", opts.num_classes, "instance category count");
  cmd->add_option("--image-width", opts.image_width, "image width in pixels");
  cmd->add_option("--image-height", opts.image_height, "image height in pixels");
  cmd->add_option("--anchor-levels", opts.anchor_levels,
                  "pyramid levels as stride:base pairs, e.g. 8:32,16:64");
  cmd->add_option("--anchor-scales", opts.anchor_scales, "comma-separated anchor scales");
  cmd->add_option("--anchor-ratios", opts.anchor_ratios, "comma-separated aspect ratios");
  cmd->add_option("--clip-anchors", opts.clip_anchors, "clip anchors to the image bounds");
  cmd->add_option("--humans-min", opts.humans_min, "minimum humans per synthetic scene");
  cmd->add_option("--humans-max", opts.humans_max, "maximum humans per synthetic scene");
  cmd->add_option("--objects-min", opts.objects_min, "minimum objects per synthetic scene");
  cmd->add_option("--objects-max", opts.objects_max, "maximum objects per synthetic scene");
}

std::vector<double> parse_double_list(const std::string& arg, const char* what) {
  std::vector<double> out;
  std::stringstream ss(arg);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": bad value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

std::vector<PyramidLevel> parse_levels(const std::string& arg) {
  std::vector<PyramidLevel> out;
  std::stringstream ss(arg);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("anchor-levels: expected stride:base pairs, got '" + item + "'");
    }
    try {
      out.push_back(
          {std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("anchor-levels: bad pair '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("anchor-levels: empty list");
  return out;
}

RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig cfg =
      opts.config_path.empty() ? RunConfig::defaults() : load_run_config(opts.config_path);
  if (opts.t_u) cfg.thresholds.t_u = *opts.t_u;
  if (opts.t_h) cfg.thresholds.t_h = *opts.t_h;
  if (opts.t_o) cfg.thresholds.t_o = *opts.t_o;
  cfg.voting.t_h = cfg.thresholds.t_h;
  cfg.voting.t_o = cfg.thresholds.t_o;
  if (opts.sigma) cfg.voting.sigma = *opts.sigma;
  if (opts.nms_iou) {
    cfg.voting.region_nms_iou =
        *opts.nms_iou >= 1.0 ? std::nullopt : std::optional<double>(*opts.nms_iou);
  }
  if (opts.score_floor) cfg.voting.score_floor = *opts.score_floor;
  if (opts.iou_threshold) cfg.eval.iou_threshold = *opts.iou_threshold;
  if (opts.strict_no_object) cfg.eval.strict_no_object = *opts.strict_no_object;
  if (opts.alpha) cfg.loss.alpha = *opts.alpha;
  if (opts.gamma) cfg.loss.gamma = *opts.gamma;
  if (opts.smooth_l1_beta) cfg.loss.smooth_l1_beta = *opts.smooth_l1_beta;
  if (opts.loss_variant) {
    if (*opts.loss_variant == "ignorance") {
      cfg.loss.variant = LossVariant::Ignorance;
    } else if (*opts.loss_variant == "focal") {
      cfg.loss.variant = LossVariant::Focal;
    } else if (*opts.loss_variant == "foreground") {
      cfg.loss.variant = LossVariant::Foreground;
    } else {
      throw ConfigError("unknown loss variant '" + *opts.loss_variant + "'");
    }
  }
  if (opts.num_verbs) cfg.task.verbs.num_verbs = *opts.num_verbs;
  if (opts.num_no_object_verbs) cfg.task.verbs.num_no_object = *opts.num_no_object_verbs;
  if (opts.human_class_id) cfg.task.human_class_id = *opts.human_class_id;
  if (opts.num_classes) cfg.task.num_classes = *opts.num_classes;
  if (opts.image_width) cfg.anchors.image_width = *opts.image_width;
  if (opts.image_height) cfg.anchors.image_height = *opts.image_height;
  if (opts.anchor_levels) cfg.anchors.levels = parse_levels(*opts.anchor_levels);
  if (opts.anchor_scales) {
    cfg.anchors.scales = parse_double_list(*opts.anchor_scales, "anchor-scales");
  }
  if (opts.anchor_ratios) {
    cfg.anchors.aspect_ratios = parse_double_list(*opts.anchor_ratios, "anchor-ratios");
  }
  if (opts.clip_anchors) cfg.anchors.clip_to_image = *opts.clip_anchors;
  if (opts.humans_min) cfg.synth.humans_min = *opts.humans_min;
  if (opts.humans_max) cfg.synth.humans_max = *opts.humans_max;
  if (opts.objects_min) cfg.synth.objects_min = *opts.objects_min;
  if (opts.objects_max) cfg.synth.objects_max = *opts.objects_max;
  cfg.validate();
  return cfg;
}

template <typename Record>
std::map<int, const Record*> by_scene(const std::vector<Record>& records) {
  std::map<int, const Record*> index;
  for (const Record& rec : records) {
    if (!index.emplace(rec.scene_id, &rec).second) {
      throw InputError("duplicate scene_id " + std::to_string(rec.scene_id));
    }
  }
  return index;
}

int run_gen_synth(const CommonOptions& common, std::uint64_t seed, const std::string& gt_path,
                  const std::string& det_path, const std::string& regions_path,
                  const SynthConfig& overrides, bool has_scenes, bool has_box_noise,
                  bool has_score_noise, bool has_drop) {
  RunConfig cfg = resolve_config(common);
  if (has_scenes) cfg.synth.scene_count = overrides.scene_count;
  if (has_box_noise) cfg.synth.box_noise_sigma = overrides.box_noise_sigma;
  if (has_score_noise) cfg.synth.score_noise_sigma = overrides.score_noise_sigma;
  if (has_drop) cfg.synth.drop_rate = overrides.drop_rate;
  cfg.synth.validate();

  const SynthOutput out = gen_synth(cfg.synth, cfg.task, cfg.anchors, cfg.thresholds, seed);
  std::vector<GtScene> scenes;
  std::vector<DetectionRecord> dets;
  std::vector<RegionRecord> regions;
  for (const SceneBundle& bundle : out.scenes) {
    scenes.push_back(bundle.gt);
    dets.push_back({bundle.gt.scene_id, bundle.detections});
    regions.push_back({bundle.gt.scene_id, bundle.regions});
  }
  save_ground_truth(gt_path, scenes);
  save_detections(det_path, dets);
  save_regions(regions_path, regions);
  std::cout << "scenes " << out.scenes.size() << "\nflagged_pairs " << out.flagged_pair_count
            << '\n';
  return 0;
}

int run_assign(const CommonOptions& common, const std::string& gt_path,
               const std::string& out_path) {
  const RunConfig cfg = resolve_config(common);
  const auto anchors = generate_anchors(cfg.anchors);
  const auto scenes = load_ground_truth(gt_path);

  std::vector<AssignmentRecord> records;
  for (const GtScene& scene : scenes) {
    scene.validate(cfg.task);
    AssignmentRecord rec;
    rec.scene_id = scene.scene_id;
    rec.num_anchors = static_cast<int>(anchors.size());
    rec.num_verbs = cfg.task.verbs.num_verbs;
    for (RegionAssignment& ra :
         assign_regions(anchors, scene, cfg.thresholds, cfg.task.verbs.num_verbs)) {
      if (ra.foreground()) rec.matched.push_back(std::move(ra));
    }
    for (InstanceActionTargets& t : assign_instance_actions(anchors, scene, cfg.task)) {
      if (t.role != AnchorRole::None) rec.instance_actions.push_back(std::move(t));
    }
    records.push_back(std::move(rec));
  }
  save_assignments(out_path, records);
  std::size_t matched = 0;
  for (const auto& rec : records) matched += rec.matched.size();
  std::cout << "scenes " << records.size() << "\nmatched_anchors " << matched << '\n';
  return 0;
}

// Rebuilds full per-anchor targets from a dump record.
ClassTargets targets_from_record(const AssignmentRecord& rec) {
  ClassTargets t;
  t.num_anchors = rec.num_anchors;
  t.num_classes = rec.num_verbs;
  t.labels.assign(static_cast<std::size_t>(rec.num_anchors) * rec.num_verbs,
                  ClassLabel::Negative);
  t.foreground.assign(static_cast<std::size_t>(rec.num_anchors), 0);
  for (const RegionAssignment& ra : rec.matched) {
    if (ra.anchor_index < 0 || ra.anchor_index >= rec.num_anchors) {
      throw InputError("assignment dump references anchor_index " +
                       std::to_string(ra.anchor_index) + " outside [0, " +
                       std::to_string(rec.num_anchors) + ")");
    }
    if (static_cast<int>(ra.class_targets.size()) != rec.num_verbs) {
      throw InputError("assignment dump class_targets length mismatch");
    }
    t.foreground[ra.anchor_index] = 1;
    for (int c = 0; c < rec.num_verbs; ++c) {
      t.labels[static_cast<std::size_t>(ra.anchor_index) * rec.num_verbs + c] =
          ra.class_targets[c];
    }
  }
  return t;
}

int run_loss_check(const CommonOptions& common, const std::string& assign_path,
                   std::uint64_t seed, int samples) {
  const RunConfig cfg = resolve_config(common);
  const auto records = load_assignments(assign_path);
  if (records.empty()) throw InputError("assignment dump " + assign_path + " is empty");

  struct Row {
    std::string name;
    double value = 0.0;
    double max_err = 0.0;
  };
  std::vector<Row> rows = {{"ignorance"}, {"focal"}, {"foreground"}, {"smooth_l1"}, {"bce"}};

  const double step = 1e-4;
  auto rel_err = [](double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
  };

  for (const AssignmentRecord& rec : records) {
    const ClassTargets targets = targets_from_record(rec);
    auto eng = make_engine(seed, static_cast<std::uint64_t>(rec.scene_id));
    std::normal_distribution<double> dist(0.0, 2.0);

    Matrix logits(targets.num_anchors, targets.num_classes);
    for (double& v : logits.data) v = dist(eng);

    std::uniform_int_distribution<std::size_t> pick(0, logits.data.size() - 1);
    for (int variant = 0; variant < 3; ++variant) {
      LossConfig loss = cfg.loss;
      loss.variant = static_cast<LossVariant>(variant);
      const LossResult res = classification_loss(logits, targets, loss);
      rows[variant].value += res.value;
      Matrix probe = logits;
      for (int s = 0; s < samples; ++s) {
        const std::size_t i = pick(eng);
        const double saved = probe.data[i];
        probe.data[i] = saved + step;
        const double up = classification_loss(probe, targets, loss).value;
        probe.data[i] = saved - step;
        const double down = classification_loss(probe, targets, loss).value;
        probe.data[i] = saved;
        rows[variant].max_err = std::max(rows[variant].max_err,
                                         rel_err((up - down) / (2.0 * step), res.grad.data[i]));
      }
    }

    // Regression loss on the dumped deltas against a perturbed copy.
    const auto matched_count = static_cast<int>(rec.matched.size());
    if (matched_count > 0) {
      Matrix target(matched_count, 8);
      for (int i = 0; i < matched_count; ++i) {
        const Delta4& hd = *rec.matched[i].human_deltas;
        const Delta4& od = *rec.matched[i].object_deltas;
        const double vals[8] = {hd.dx, hd.dy, hd.dw, hd.dh, od.dx, od.dy, od.dw, od.dh};
        for (int c = 0; c < 8; ++c) target.at(i, c) = vals[c];
      }
      Matrix pred = target;
      std::normal_distribution<double> jitter(0.0, 0.2);
      for (double& v : pred.data) v += jitter(eng);
      const LossResult res = smooth_l1(pred, target, cfg.loss.smooth_l1_beta);
      rows[3].value += res.value;
      std::uniform_int_distribution<std::size_t> rpick(0, pred.data.size() - 1);
      Matrix probe = pred;
      for (int s = 0; s < samples; ++s) {
        const std::size_t i = rpick(eng);
        const double saved = probe.data[i];
        probe.data[i] = saved + step;
        const double up = smooth_l1(probe, target, cfg.loss.smooth_l1_beta).value;
        probe.data[i] = saved - step;
        const double down = smooth_l1(probe, target, cfg.loss.smooth_l1_beta).value;
        probe.data[i] = saved;
        rows[3].max_err =
            std::max(rows[3].max_err, rel_err((up - down) / (2.0 * step), res.grad.data[i]));
      }
    }

    const ActionTargets actions =
        ActionTargets::from_instance_actions(rec.instance_actions, rec.num_verbs);
    if (actions.num_rows > 0) {
      Matrix action_logits(actions.num_rows, actions.num_classes);
      for (double& v : action_logits.data) v = dist(eng);
      const LossResult res = instance_action_bce(action_logits, actions);
      rows[4].value += res.value;
      std::uniform_int_distribution<std::size_t> apick(0, action_logits.data.size() - 1);
      Matrix probe = action_logits;
      for (int s = 0; s < samples; ++s) {
        const std::size_t i = apick(eng);
        const double saved = probe.data[i];
        probe.data[i] = saved + step;
        const double up = instance_action_bce(probe, actions).value;
        probe.data[i] = saved - step;
        const double down = instance_action_bce(probe, actions).value;
        probe.data[i] = saved;
        rows[4].max_err =
            std::max(rows[4].max_err, rel_err((up - down) / (2.0 * step), res.grad.data[i]));
      }
    }
  }

  std::cout << "loss\tmean_value\tmax_fd_rel_err\n";
  std::cout.precision(12);
  for (const Row& row : rows) {
    std::cout << row.name << '\t' << row.value / static_cast<double>(records.size()) << '\t'
              << row.max_err << '\n';
  }
  return 0;
}

int run_infer(const CommonOptions& common, const std::string& det_path,
              const std::string& regions_path, const std::string& out_path) {
  const RunConfig cfg = resolve_config(common);
  const auto anchors = generate_anchors(cfg.anchors);
  const auto det_records = load_detections(det_path);
  const auto region_records = load_regions(regions_path);
  const auto regions_index = by_scene(region_records);

  static const std::vector<RegionPrediction> kNoRegions;
  std::vector<TripletRecord> out;
  for (const DetectionRecord& det : det_records) {
    const auto it = regions_index.find(det.scene_id);
    const auto& regions = it == regions_index.end() ? kNoRegions : it->second->regions;
    out.push_back(
        {det.scene_id, run_voting(regions, anchors, det.detections, cfg.voting, cfg.task)});
  }
  std::sort(out.begin(), out.end(), [](const TripletRecord& a, const TripletRecord& b) {
    return a.scene_id < b.scene_id;
  });
  save_triplets(out_path, out);
  std::size_t total = 0;
  for (const auto& rec : out) total += rec.triplets.size();
  std::cout << "scenes " << out.size() << "\ntriplets " << total << '\n';
  return 0;
}

int run_eval(const CommonOptions& common, const std::string& triplets_path,
             const std::string& det_path, const std::string& gt_path) {
  const RunConfig cfg = resolve_config(common);
  const auto scenes = load_ground_truth(gt_path);
  const auto det_records = load_detections(det_path);
  const auto triplet_records = load_triplets(triplets_path);
  const auto det_index = by_scene(det_records);
  const auto triplet_index = by_scene(triplet_records);

  std::vector<std::vector<TripletScore>> triplets;
  std::vector<std::vector<InstanceDetection>> detections;
  for (const GtScene& scene : scenes) {
    scene.validate(cfg.task);
    const auto d = det_index.find(scene.scene_id);
    if (d == det_index.end()) {
      throw InputError("no detections for scene_id " + std::to_string(scene.scene_id));
    }
    detections.push_back(d->second->detections);
    const auto t = triplet_index.find(scene.scene_id);
    triplets.push_back(t == triplet_index.end() ? std::vector<TripletScore>()
                                                : t->second->triplets);
  }

  const EvalReport report = evaluate(scenes, triplets, detections, cfg.task.verbs, cfg.eval);
  std::cout << "verb_id\tap\ttp\tfp\tgt\n";
  std::cout.precision(12);
  for (const VerbAP& v : report.per_verb) {
    std::cout << v.verb_id << '\t' << v.ap << '\t' << v.tp_count << '\t' << v.fp_count << '\t'
              << v.gt_count << '\n';
  }
  std::cout << "map_role\t" << report.map_role << '\n';
  return 0;
}

int run_ablate(const CommonOptions& common, const std::string& axis, std::uint64_t seed,
               const std::string& out_path) {
  const RunConfig cfg = resolve_config(common);
  std::ostringstream table;
  table.precision(12);
  if (axis == "nms-iou") {
    table << "nms_iou\tmap_role\n";
    for (const NmsSweepRow& row : ablate_nms(cfg, seed, {1.0, 0.9, 0.7, 0.5})) {
      table << row.nms_iou << '\t' << row.map_role << '\n';
    }
  } else if (axis == "sigma") {
    table << "sigma\tmap_role\n";
    for (const SigmaSweepRow& row : ablate_sigma(cfg, seed, {0.5, 0.7, 0.9, 1.1, 1.3})) {
      table << row.sigma << '\t' << row.map_role << '\n';
    }
  } else if (axis == "thresholds") {
    table << "t_h\tt_o\tt_u\tmap_role\tflagged_pairs\n";
    const std::vector<Thresholds> settings = {Thresholds{0.5, 0.5, 0.5},
                                              Thresholds{0.5, 0.25, 0.25},
                                              Thresholds{0.25, 0.25, 0.25}};
    for (const ThresholdSweepRow& row : ablate_thresholds(cfg, seed, settings)) {
      table << row.thresholds.t_h << '\t' << row.thresholds.t_o << '\t' << row.thresholds.t_u
            << '\t' << row.map_role << '\t' << row.flagged_pairs << '\n';
    }
  } else if (axis == "loss-variant") {
    table << "variant\tmean_value\tmax_fd_rel_err\n";
    for (const LossVariantRow& row : ablate_loss_variants(cfg, seed)) {
      const char* name = row.variant == LossVariant::Ignorance ? "ignorance"
                         : row.variant == LossVariant::Focal   ? "focal"
                                                               : "foreground";
      table << name << '\t' << row.value << '\t' << row.max_fd_rel_err << '\n';
    }
  } else {
    throw ConfigError("ablate: unknown axis '" + axis +
                      "' (expected nms-iou, sigma, thresholds or loss-variant)");
  }

  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << table.str();
  }
  return 0;
}

int run_bench(const CommonOptions& common, std::uint64_t seed, const std::string& scales_arg,
              int repeats) {
  const RunConfig cfg = resolve_config(common);
  std::vector<int> scales;
  std::stringstream ss(scales_arg);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      scales.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bench-voting: bad scale '" + item + "'");
    }
    if (scales.back() < 1) throw ConfigError("bench-voting: scales must be >= 1");
  }
  if (scales.empty()) throw ConfigError("bench-voting: no scales given");

  const BenchReport report = bench_voting(cfg, seed, scales, repeats);
  std::cout << "scale\tmatched_regions\tmillis\n";
  std::cout.precision(6);
  for (const BenchRow& row : report.rows) {
    std::cout << row.scale << '\t' << row.matched_regions << '\t' << std::fixed << row.millis
              << '\n';
  }
  if (report.rows.size() >= 2) {
    std::cout << "loglog_slope\t" << report.loglog_slope << '\n';
  }
  return 0;
}

int run_emit_distribution(const CommonOptions& common, const std::string& det_path,
                          const std::string& regions_path, int scene_id, int human_det,
                          int verb_id, double stride, const std::string& out_path) {
  const RunConfig cfg = resolve_config(common);
  const auto anchors = generate_anchors(cfg.anchors);
  const auto det_records = load_detections(det_path);
  const auto region_records = load_regions(regions_path);
  const auto det_index = by_scene(det_records);
  const auto regions_index = by_scene(region_records);

  const auto d = det_index.find(scene_id);
  if (d == det_index.end()) {
    throw InputError("no detections for scene_id " + std::to_string(scene_id));
  }
  static const std::vector<RegionPrediction> kNoRegions;
  const auto r = regions_index.find(scene_id);
  const auto& regions = r == regions_index.end() ? kNoRegions : r->second->regions;

  const DistributionGrid grid = fused_location_grid(
      regions, anchors, d->second->detections, human_det, verb_id, cfg.anchors.image_width,
      cfg.anchors.image_height, stride, cfg.voting, cfg.task);

  const nlohmann::json j = {{"scene_id", scene_id},     {"human_det", human_det},
                            {"verb_id", verb_id},       {"rows", grid.rows},
                            {"cols", grid.cols},        {"cell_stride", grid.cell_stride},
                            {"values", grid.values}};
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write " + out_path);
  out << j.dump() << '\n';
  std::cout << "rows " << grid.rows << "\ncols " << grid.cols << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction-region voting engine for human-object interaction detection"};
  app.require_subcommand(1);

  CommonOptions common;
  int exit_code = 0;

  auto* gen = app.add_subcommand("gen-synth", "generate a synthetic benchmark");
  std::uint64_t gen_seed = 0;
  std::string gen_gt = "gt.jsonl", gen_det = "detections.jsonl", gen_regions = "regions.jsonl";
  SynthConfig gen_overrides;
  add_common(gen, common);
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--gt", gen_gt, "output ground-truth file");
  gen->add_option("--detections", gen_det, "output detections file");
  gen->add_option("--regions", gen_regions, "output region-predictions file");
  auto* opt_scenes = gen->add_option("--scenes", gen_overrides.scene_count, "scene count");
  auto* opt_box =
      gen->add_option("--box-noise", gen_overrides.box_noise_sigma, "box jitter sigma in pixels");
  auto* opt_score =
      gen->add_option("--score-noise", gen_overrides.score_noise_sigma, "score noise sigma");
  auto* opt_drop = gen->add_option("--drop-rate", gen_overrides.drop_rate,
                                   "fraction of region predictions dropped");
  gen->callback([&] {
    exit_code = run_gen_synth(common, gen_seed, gen_gt, gen_det, gen_regions, gen_overrides,
                              opt_scenes->count() > 0, opt_box->count() > 0,
                              opt_score->count() > 0, opt_drop->count() > 0);
  });

  auto* assign = app.add_subcommand("assign", "dump per-anchor training targets");
  std::string assign_gt, assign_out = "assignments.jsonl";
  add_common(assign, common);
  assign->add_option("--gt", assign_gt, "ground-truth file")->required();
  assign->add_option("--out", assign_out, "output assignment dump");
  assign->callback([&] { exit_code = run_assign(common, assign_gt, assign_out); });

  auto* loss = app.add_subcommand("loss-check", "loss values and gradient checks on a dump");
  std::string loss_assign;
  std::uint64_t loss_seed = 0;
  int loss_samples = 24;
  add_common(loss, common);
  loss->add_option("--assign", loss_assign, "assignment dump")->required();
  loss->add_option("--seed", loss_seed, "random-logit seed")->required();
  loss->add_option("--samples", loss_samples, "finite-difference probes per loss and scene");
  loss->callback(
      [&] { exit_code = run_loss_check(common, loss_assign, loss_seed, loss_samples); });

  auto* infer = app.add_subcommand("infer", "run voting inference");
  std::string infer_det, infer_regions, infer_out = "triplets.jsonl";
  add_common(infer, common);
  infer->add_option("--detections", infer_det, "detections file")->required();
  infer->add_option("--regions", infer_regions, "region-predictions file")->required();
  infer->add_option("--out", infer_out, "output triplets file");
  infer->callback([&] { exit_code = run_infer(common, infer_det, infer_regions, infer_out); });

  auto* eval_cmd = app.add_subcommand("eval", "score triplets against ground truth");
  std::string eval_triplets, eval_det, eval_gt;
  add_common(eval_cmd, common);
  eval_cmd->add_option("--triplets", eval_triplets, "triplets file")->required();
  eval_cmd->add_option("--detections", eval_det, "detections file")->required();
  eval_cmd->add_option("--gt", eval_gt, "ground-truth file")->required();
  eval_cmd->callback([&] { exit_code = run_eval(common, eval_triplets, eval_det, eval_gt); });

  auto* ablate = app.add_subcommand("ablate", "sweep one axis on the seeded noisy benchmark");
  std::string ablate_axis, ablate_out;
  std::uint64_t ablate_seed = 0;
  add_common(ablate, common);
  ablate->add_option("--axis", ablate_axis, "nms-iou | sigma | thresholds | loss-variant")
      ->required();
  ablate->add_option("--seed", ablate_seed, "benchmark seed")->required();
  ablate->add_option("--out", ablate_out, "write the table here instead of stdout");
  ablate->callback([&] { exit_code = run_ablate(common, ablate_axis, ablate_seed, ablate_out); });

  auto* bench = app.add_subcommand("bench-voting", "time voting across region scales");
  std::string bench_scales = "1,2,4,8,16";
  std::uint64_t bench_seed = 0;
  int bench_repeats = 5;
  add_common(bench, common);
  bench->add_option("--seed", bench_seed, "benchmark seed")->required();
  bench->add_option("--scales", bench_scales, "comma-separated duplication factors");
  bench->add_option("--repeats", bench_repeats, "timing repetitions (best is kept)");
  bench->callback(
      [&] { exit_code = run_bench(common, bench_seed, bench_scales, bench_repeats); });

  auto* emit =
      app.add_subcommand("emit-distribution", "rasterize the fused location map for one human");
  std::string emit_det, emit_regions, emit_out = "distribution.json";
  int emit_scene = 0, emit_human = 0, emit_verb = 0;
  double emit_stride = 8.0;
  add_common(emit, common);
  emit->add_option("--detections", emit_det, "detections file")->required();
  emit->add_option("--regions", emit_regions, "region-predictions file")->required();
  emit->add_option("--scene", emit_scene, "scene id")->required();
  emit->add_option("--human", emit_human, "human detection index")->required();
  emit->add_option("--verb", emit_verb, "verb id")->required();
  emit->add_option("--stride", emit_stride, "grid cell stride in pixels");
  emit->add_option("--out", emit_out, "output grid file");
  emit->callback([&] {
    exit_code = run_emit_distribution(common, emit_det, emit_regions, emit_scene, emit_human,
                                      emit_verb, emit_stride, emit_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
