#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hoi/config.hpp"
#include "hoi/errors.hpp"
#include "hoi/harness.hpp"
#include "hoi/io.hpp"
#include "hoi/rng.hpp"
#include "hoi/synth.hpp"

using namespace hoi;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hoivote_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

RunConfig small_config() {
  RunConfig cfg = RunConfig::defaults();
  cfg.anchors.image_width = 256;
  cfg.anchors.image_height = 256;
  cfg.anchors.levels = {{8.0, 32.0}, {16.0, 64.0}, {32.0, 128.0}, {64.0, 256.0}};
  cfg.synth.scene_count = 6;
  return cfg;
}

}  // namespace

TEST_CASE("seed splitting is deterministic and stream-independent") {
  CHECK(derive_seed(42, 0) == derive_seed(42, 0));
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0, 0) != derive_seed(42, 0, 1));
  CHECK(derive_seed(42, 5) != derive_seed(43, 5));
}

TEST_CASE("ground-truth files round-trip") {
  std::vector<GtScene> scenes(1);
  GtScene& s = scenes[0];
  s.scene_id = 3;
  s.width = 128;
  s.height = 96;
  s.instances.push_back(GtInstance{Box(20, 20, 10, 14), 0});
  s.instances.push_back(GtInstance{Box(40, 30, 8, 8), 2});
  s.interactions.push_back(GtInteraction{0, 1, 1});
  s.interactions.push_back(GtInteraction{0, kNone, 7});

  const auto path = temp_file("gt.jsonl");
  save_ground_truth(path, scenes);
  const auto back = load_ground_truth(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].scene_id == 3);
  CHECK(back[0].width == 128.0);
  REQUIRE(back[0].instances.size() == 2);
  CHECK(back[0].instances[0].box == s.instances[0].box);
  CHECK(back[0].instances[1].class_id == 2);
  REQUIRE(back[0].interactions.size() == 2);
  CHECK(back[0].interactions[1].object_idx == kNone);
  std::filesystem::remove(path);
}

TEST_CASE("detection, region and triplet files round-trip") {
  const auto dpath = temp_file("det.jsonl");
  std::vector<DetectionRecord> dets(1);
  dets[0].scene_id = 1;
  dets[0].detections.push_back(InstanceDetection{Box(10, 10, 4, 6), 0, 0.75, {0.1, 0.9}});
  save_detections(dpath, dets);
  const auto dback = load_detections(dpath);
  REQUIRE(dback.size() == 1);
  CHECK(dback[0].detections[0].box == dets[0].detections[0].box);
  CHECK(dback[0].detections[0].score == 0.75);
  CHECK(dback[0].detections[0].action_scores == std::vector<double>{0.1, 0.9});
  std::filesystem::remove(dpath);

  const auto rpath = temp_file("regions.jsonl");
  std::vector<RegionRecord> regions(1);
  regions[0].scene_id = 2;
  regions[0].regions.push_back(
      RegionPrediction{17, {0.5, 0.25}, Box(5, 5, 2, 2), Box(8, 5, 2, 2)});
  save_regions(rpath, regions);
  const auto rback = load_regions(rpath);
  REQUIRE(rback.size() == 1);
  CHECK(rback[0].regions[0].anchor_index == 17);
  CHECK(rback[0].regions[0].inter_scores == std::vector<double>{0.5, 0.25});
  CHECK(rback[0].regions[0].human_box == regions[0].regions[0].human_box);
  std::filesystem::remove(rpath);

  const auto tpath = temp_file("triplets.jsonl");
  std::vector<TripletRecord> triplets(1);
  triplets[0].scene_id = 4;
  triplets[0].triplets.push_back(TripletScore{0, 1, 2, 0.125});
  triplets[0].triplets.push_back(TripletScore{1, kNone, 5, 0.5});
  save_triplets(tpath, triplets);
  const auto tback = load_triplets(tpath);
  REQUIRE(tback.size() == 1);
  CHECK(tback[0].triplets[0].score == 0.125);
  CHECK(tback[0].triplets[1].object_det == kNone);
  std::filesystem::remove(tpath);
}

TEST_CASE("assignment dumps round-trip") {
  AssignmentRecord rec;
  rec.scene_id = 5;
  rec.num_anchors = 100;
  rec.num_verbs = 3;
  RegionAssignment ra;
  ra.anchor_index = 11;
  ra.matched_interaction = 0;
  ra.class_targets = {ClassLabel::Positive, ClassLabel::Negative, ClassLabel::Ignored};
  ra.human_deltas = Delta4{0.1, -0.2, 0.05, 0.0};
  ra.object_deltas = Delta4{0.3, 0.1, -0.25, 0.5};
  rec.matched.push_back(ra);
  InstanceActionTargets act;
  act.anchor_index = 11;
  act.role = AnchorRole::Human;
  act.action_targets = {1, 0, 1};
  rec.instance_actions.push_back(act);

  const auto path = temp_file("assign.jsonl");
  save_assignments(path, {rec});
  const auto back = load_assignments(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].num_anchors == 100);
  REQUIRE(back[0].matched.size() == 1);
  CHECK(back[0].matched[0].class_targets == ra.class_targets);
  CHECK(*back[0].matched[0].human_deltas == *ra.human_deltas);
  REQUIRE(back[0].instance_actions.size() == 1);
  CHECK(back[0].instance_actions[0].role == AnchorRole::Human);
  CHECK(back[0].instance_actions[0].action_targets == act.action_targets);
  std::filesystem::remove(path);
}

TEST_CASE("malformed input names the file and line") {
  const auto path = temp_file("bad.jsonl");
  std::ofstream(path) << "{\"scene_id\": 0}\n{not json\n";
  try {
    load_ground_truth(path);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string what = e.what();
    CHECK(what.find("bad.jsonl") != std::string::npos);
    CHECK(what.find(":1") != std::string::npos);  // first record lacks fields
  }
  std::filesystem::remove(path);
}

TEST_CASE("run config round-trips and rejects unknown keys") {
  RunConfig cfg = RunConfig::defaults();
  cfg.thresholds = Thresholds{0.3, 0.2, 0.4};
  cfg.voting.sigma = 1.1;
  cfg.voting.region_nms_iou = 0.7;
  cfg.loss.variant = LossVariant::Foreground;
  cfg.synth.drop_rate = 0.5;

  const auto path = temp_file("config.json");
  save_run_config(path, cfg);
  const RunConfig back = load_run_config(path);
  CHECK(back.thresholds.t_u == 0.3);
  CHECK(back.voting.sigma == 1.1);
  CHECK(back.voting.region_nms_iou == 0.7);
  CHECK(back.voting.t_h == cfg.thresholds.t_h);  // wired from thresholds
  CHECK(back.loss.variant == LossVariant::Foreground);
  CHECK(back.synth.drop_rate == 0.5);
  CHECK(back.anchors.levels.size() == cfg.anchors.levels.size());
  std::filesystem::remove(path);

  const auto bad = temp_file("bad_config.json");
  std::ofstream(bad) << "{\"votign\": {\"sigma\": 0.9}}";
  CHECK_THROWS_AS(load_run_config(bad), ConfigError);
  std::ofstream(bad) << "{\"voting\": {\"sigma\": -1}}";
  CHECK_THROWS_AS(load_run_config(bad), ConfigError);
  std::filesystem::remove(bad);
}

TEST_CASE("gen_synth is deterministic: same seed gives byte-identical files") {
  const RunConfig cfg = small_config();
  SynthConfig synth = cfg.synth;
  synth.box_noise_sigma = 4.0;
  synth.score_noise_sigma = 0.2;
  synth.drop_rate = 0.3;

  const auto a = gen_synth(synth, cfg.task, cfg.anchors, cfg.thresholds, 99);
  const auto b = gen_synth(synth, cfg.task, cfg.anchors, cfg.thresholds, 99);

  const auto path_a = temp_file("synth_a.jsonl");
  const auto path_b = temp_file("synth_b.jsonl");
  std::vector<GtScene> scenes_a, scenes_b;
  std::vector<DetectionRecord> dets_a, dets_b;
  std::vector<RegionRecord> regs_a, regs_b;
  for (const SceneBundle& s : a.scenes) {
    scenes_a.push_back(s.gt);
    dets_a.push_back({s.gt.scene_id, s.detections});
    regs_a.push_back({s.gt.scene_id, s.regions});
  }
  for (const SceneBundle& s : b.scenes) {
    scenes_b.push_back(s.gt);
    dets_b.push_back({s.gt.scene_id, s.detections});
    regs_b.push_back({s.gt.scene_id, s.regions});
  }
  save_ground_truth(path_a, scenes_a);
  save_ground_truth(path_b, scenes_b);
  CHECK(slurp(path_a) == slurp(path_b));
  save_detections(path_a, dets_a);
  save_detections(path_b, dets_b);
  CHECK(slurp(path_a) == slurp(path_b));
  save_regions(path_a, regs_a);
  save_regions(path_b, regs_b);
  CHECK(slurp(path_a) == slurp(path_b));
  std::filesystem::remove(path_a);
  std::filesystem::remove(path_b);

  // A different seed must change the content.
  const auto c = gen_synth(synth, cfg.task, cfg.anchors, cfg.thresholds, 100);
  CHECK(c.flagged_pair_count != a.flagged_pair_count);
}

TEST_CASE("generated scenes validate and respect the verb space") {
  const RunConfig cfg = small_config();
  const auto out = gen_synth(cfg.synth, cfg.task, cfg.anchors, cfg.thresholds, 5);
  REQUIRE(out.scenes.size() == 6);
  for (const SceneBundle& bundle : out.scenes) {
    bundle.gt.validate(cfg.task);
    for (const InstanceDetection& det : bundle.detections) {
      CHECK(det.action_scores.size() == static_cast<std::size_t>(cfg.task.verbs.num_verbs));
      CHECK(det.score >= 0.0);
      CHECK(det.score <= 1.0);
    }
    for (const RegionPrediction& region : bundle.regions) {
      for (double s : region.inter_scores) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
    }
  }
}

TEST_CASE("drop rate one removes every region prediction and with-object triplet") {
  RunConfig cfg = small_config();
  cfg.synth.drop_rate = 1.0;
  const auto out = gen_synth(cfg.synth, cfg.task, cfg.anchors, cfg.thresholds, 6);
  const auto anchors = generate_anchors(cfg.anchors);
  for (const SceneBundle& bundle : out.scenes) {
    CHECK(bundle.regions.empty());
    for (const TripletScore& t :
         run_voting(bundle.regions, anchors, bundle.detections, cfg.voting, cfg.task)) {
      CHECK(t.object_det == kNone);
    }
  }
}

TEST_CASE("oracle closure: the generator's flagged set equals the assignment module's") {
  const RunConfig cfg = small_config();
  const auto out = gen_synth(cfg.synth, cfg.task, cfg.anchors, cfg.thresholds, 7);
  const auto anchors = generate_anchors(cfg.anchors);
  std::size_t matched_total = 0;
  for (const SceneBundle& bundle : out.scenes) {
    const auto assignments =
        assign_regions(anchors, bundle.gt, cfg.thresholds, cfg.task.verbs.num_verbs);
    std::vector<std::pair<int, int>> matched;
    for (const RegionAssignment& ra : assignments) {
      if (ra.foreground()) matched.emplace_back(ra.anchor_index, ra.matched_interaction);
    }
    CHECK(matched == bundle.matched_anchors);
    matched_total += matched.size();
  }
  CHECK(matched_total > 0);
}

TEST_CASE("zero-noise synthetic scenes are perfectly recovered") {
  const RunConfig cfg = small_config();
  const auto out = gen_synth(cfg.synth, cfg.task, cfg.anchors, cfg.thresholds, 8);
  const auto anchors = generate_anchors(cfg.anchors);
  const EvalReport report =
      evaluate_bundles(out, anchors, cfg.voting, cfg.eval, cfg.task);
  CHECK(report.map_role == doctest::Approx(1.0).epsilon(1e-9));

  // Each ground-truth interaction tops its pair: among the triplets of the
  // pair (detection indices mirror instance indices in generated scenes),
  // the true verb carries the highest score.
  for (const SceneBundle& bundle : out.scenes) {
    const auto triplets =
        run_voting(bundle.regions, anchors, bundle.detections, cfg.voting, cfg.task);
    for (const GtInteraction& it : bundle.gt.interactions) {
      if (!it.has_object()) continue;
      double best_score = -1.0;
      int best_verb = kNone;
      for (const TripletScore& t : triplets) {
        if (t.human_det == it.human_idx && t.object_det == it.object_idx &&
            t.score > best_score) {
          best_score = t.score;
          best_verb = t.verb_id;
        }
      }
      CHECK(best_verb == it.verb_id);
    }
  }
}

TEST_CASE("a single-sigma sweep matches the plain pipeline on the same benchmark") {
  RunConfig cfg = small_config();
  cfg.synth.scene_count = 4;
  const auto rows = ablate_sigma(cfg, 12, {0.9});
  REQUIRE(rows.size() == 1);

  const SynthOutput data =
      gen_synth(noisy_benchmark(cfg.synth), cfg.task, cfg.anchors, cfg.thresholds, 12);
  const auto anchors = generate_anchors(cfg.anchors);
  const EvalReport direct = evaluate_bundles(data, anchors, cfg.voting, cfg.eval, cfg.task);
  CHECK(rows[0].map_role == direct.map_role);
}

TEST_CASE("noisy benchmark stays evaluable") {
  RunConfig cfg = small_config();
  const SynthConfig noisy = noisy_benchmark(cfg.synth);
  CHECK(noisy.box_noise_sigma > 0.0);
  const auto out = gen_synth(noisy, cfg.task, cfg.anchors, cfg.thresholds, 9);
  const auto anchors = generate_anchors(cfg.anchors);
  const EvalReport report = evaluate_bundles(out, anchors, cfg.voting, cfg.eval, cfg.task);
  CHECK(report.map_role > 0.0);
  CHECK(report.map_role <= 1.0);
  CHECK(count_matched_regions(out, anchors, cfg.voting, cfg.task) > 0);
}

TEST_CASE("threshold sweep reports denser flagging at lower thresholds") {
  RunConfig cfg = small_config();
  cfg.synth.scene_count = 4;
  const auto rows = ablate_thresholds(cfg, 10,
                                      {Thresholds{0.5, 0.5, 0.5}, Thresholds{0.25, 0.25, 0.25}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].flagged_pairs >= rows[0].flagged_pairs);
}

TEST_CASE("bench_voting produces positive timings for increasing scales") {
  RunConfig cfg = small_config();
  cfg.synth.scene_count = 2;
  const BenchReport report = bench_voting(cfg, 11, {1, 2}, 2);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].matched_regions > 0);
  CHECK(report.rows[1].matched_regions == 2 * report.rows[0].matched_regions);
  CHECK(report.rows[0].millis > 0.0);

  // A single-scale run emits one row and no slope.
  const BenchReport single = bench_voting(cfg, 11, {1}, 1);
  CHECK(single.rows.size() == 1);
  CHECK(single.loglog_slope == 0.0);
}
