#include "hoi/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "hoi/losses.hpp"
#include "hoi/rng.hpp"

namespace hoi {

EvalReport evaluate_bundles(const SynthOutput& data, const std::vector<Anchor>& anchors,
                            const VotingConfig& voting, const EvalConfig& eval,
                            const TaskSpec& task) {
  std::vector<GtScene> scenes;
  std::vector<std::vector<TripletScore>> triplets;
  std::vector<std::vector<InstanceDetection>> detections;
  scenes.reserve(data.scenes.size());
  for (const SceneBundle& bundle : data.scenes) {
    scenes.push_back(bundle.gt);
    detections.push_back(bundle.detections);
    triplets.push_back(run_voting(bundle.regions, anchors, bundle.detections, voting, task));
  }
  return evaluate(scenes, triplets, detections, task.verbs, eval);
}

std::size_t count_matched_regions(const SynthOutput& data, const std::vector<Anchor>& anchors,
                                  const VotingConfig& voting, const TaskSpec& task) {
  std::size_t count = 0;
  for (const SceneBundle& bundle : data.scenes) {
    for (const RegionPrediction& region : bundle.regions) {
      const Box& anchor_box = anchors[region.anchor_index].box;
      const auto h =
          match_region_to_human(anchor_box, bundle.detections, task.human_class_id, voting.t_h);
      if (!h) continue;
      if (match_region_to_object(region, anchor_box, bundle.detections,
                                 bundle.detections[*h].box, voting.t_o, voting.sigma)) {
        ++count;
      }
    }
  }
  return count;
}

RunConfig benchmark_config() {
  RunConfig cfg = RunConfig::defaults();
  cfg.anchors.scales = {1.0, std::pow(2.0, 0.25), std::pow(2.0, 0.5), std::pow(2.0, 0.75)};
  cfg.synth.scene_count = 50;
  cfg.synth.objects_min = 3;
  cfg.synth.objects_max = 6;
  cfg.synth = noisy_benchmark(cfg.synth);
  return cfg;
}

SynthConfig noisy_benchmark(const SynthConfig& base) {
  SynthConfig cfg = base;
  // Noise-free configs get the documented benchmark profile; configs that
  // already specify noise are taken as-is.
  if (cfg.box_noise_sigma == 0.0 && cfg.score_noise_sigma == 0.0 && cfg.drop_rate == 0.0) {
    cfg.box_noise_sigma = 16.0;
    cfg.score_noise_sigma = 0.35;
    cfg.drop_rate = 0.5;
  }
  return cfg;
}

std::vector<NmsSweepRow> ablate_nms(const RunConfig& cfg, std::uint64_t seed,
                                    const std::vector<double>& nms_ious) {
  const auto anchors = generate_anchors(cfg.anchors);
  const SynthOutput data =
      gen_synth(noisy_benchmark(cfg.synth), cfg.task, cfg.anchors, cfg.thresholds, seed);

  std::vector<NmsSweepRow> rows;
  for (double v : nms_ious) {
    VotingConfig voting = cfg.voting;
    voting.region_nms_iou = v >= 1.0 ? std::nullopt : std::optional<double>(v);
    rows.push_back(
        {v, evaluate_bundles(data, anchors, voting, cfg.eval, cfg.task).map_role});
  }
  return rows;
}

std::vector<SigmaSweepRow> ablate_sigma(const RunConfig& cfg, std::uint64_t seed,
                                        const std::vector<double>& sigmas) {
  const auto anchors = generate_anchors(cfg.anchors);
  const SynthOutput data =
      gen_synth(noisy_benchmark(cfg.synth), cfg.task, cfg.anchors, cfg.thresholds, seed);

  std::vector<SigmaSweepRow> rows;
  for (double sigma : sigmas) {
    VotingConfig voting = cfg.voting;
    voting.sigma = sigma;
    rows.push_back(
        {sigma, evaluate_bundles(data, anchors, voting, cfg.eval, cfg.task).map_role});
  }
  return rows;
}

std::vector<ThresholdSweepRow> ablate_thresholds(const RunConfig& cfg, std::uint64_t seed,
                                                 const std::vector<Thresholds>& settings) {
  const auto anchors = generate_anchors(cfg.anchors);
  std::vector<ThresholdSweepRow> rows;
  for (const Thresholds& th : settings) {
    // Regenerated per setting: flagging density depends on the thresholds.
    // Same seed, so scenes and noise draws stay paired across settings.
    const SynthOutput data =
        gen_synth(noisy_benchmark(cfg.synth), cfg.task, cfg.anchors, th, seed);
    VotingConfig voting = cfg.voting;
    voting.t_h = th.t_h;
    voting.t_o = th.t_o;
    rows.push_back({th, evaluate_bundles(data, anchors, voting, cfg.eval, cfg.task).map_role,
                    data.flagged_pair_count});
  }
  return rows;
}

namespace {

double sampled_fd_error(const Matrix& logits, const ClassTargets& targets, const LossConfig& cfg,
                        const LossResult& analytic, std::mt19937_64& eng, int samples) {
  if (logits.data.empty()) return 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, logits.data.size() - 1);
  const double step = 1e-4;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const std::size_t i = pick(eng);
    Matrix probe = logits;
    probe.data[i] += step;
    const double up = classification_loss(probe, targets, cfg).value;
    probe.data[i] -= 2.0 * step;
    const double down = classification_loss(probe, targets, cfg).value;
    const double numeric = (up - down) / (2.0 * step);
    const double exact = analytic.grad.data[i];
    const double err = std::abs(numeric - exact) / std::max({1.0, std::abs(numeric), std::abs(exact)});
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace

std::vector<LossVariantRow> ablate_loss_variants(const RunConfig& cfg, std::uint64_t seed) {
  const auto anchors = generate_anchors(cfg.anchors);
  SynthConfig synth = noisy_benchmark(cfg.synth);
  synth.scene_count = std::min(synth.scene_count, 4);
  const SynthOutput data = gen_synth(synth, cfg.task, cfg.anchors, cfg.thresholds, seed);

  std::vector<LossVariantRow> rows;
  for (LossVariant variant :
       {LossVariant::Ignorance, LossVariant::Focal, LossVariant::Foreground}) {
    LossConfig loss = cfg.loss;
    loss.variant = variant;
    double value = 0.0;
    double worst = 0.0;
    auto eng = make_engine(seed, 0xab1a7e, static_cast<std::uint64_t>(variant));
    std::normal_distribution<double> logits_dist(0.0, 2.0);
    for (const SceneBundle& bundle : data.scenes) {
      const auto assignments =
          assign_regions(anchors, bundle.gt, cfg.thresholds, cfg.task.verbs.num_verbs);
      const auto targets = ClassTargets::from_assignments(assignments, cfg.task.verbs.num_verbs);
      Matrix logits(targets.num_anchors, targets.num_classes);
      for (double& v : logits.data) v = logits_dist(eng);
      const LossResult res = classification_loss(logits, targets, loss);
      value += res.value;
      worst = std::max(worst, sampled_fd_error(logits, targets, loss, res, eng, 32));
    }
    rows.push_back({variant, value / static_cast<double>(data.scenes.size()), worst});
  }
  return rows;
}

BenchReport bench_voting(const RunConfig& cfg, std::uint64_t seed,
                         const std::vector<int>& scales, int repeats) {
  const auto anchors = generate_anchors(cfg.anchors);
  SynthConfig synth = noisy_benchmark(cfg.synth);
  synth.scene_count = std::min(cfg.synth.scene_count, 8);
  synth.drop_rate = 0.0;
  const SynthOutput base = gen_synth(synth, cfg.task, cfg.anchors, cfg.thresholds, seed);

  BenchReport report;
  for (int scale : scales) {
    SynthOutput scaled;
    scaled.scenes.reserve(base.scenes.size());
    for (const SceneBundle& bundle : base.scenes) {
      SceneBundle copy = bundle;
      copy.regions.clear();
      copy.regions.reserve(bundle.regions.size() * static_cast<std::size_t>(scale));
      for (int k = 0; k < scale; ++k) {
        copy.regions.insert(copy.regions.end(), bundle.regions.begin(), bundle.regions.end());
      }
      scaled.scenes.push_back(std::move(copy));
    }

    const std::size_t matched =
        count_matched_regions(scaled, anchors, cfg.voting, cfg.task);

    double best_ms = std::numeric_limits<double>::infinity();
    std::size_t sink = 0;
    for (int r = 0; r < std::max(1, repeats); ++r) {
      const auto start = std::chrono::steady_clock::now();
      for (const SceneBundle& bundle : scaled.scenes) {
        sink += run_voting(bundle.regions, anchors, bundle.detections, cfg.voting, cfg.task).size();
      }
      const auto stop = std::chrono::steady_clock::now();
      best_ms = std::min(best_ms,
                         std::chrono::duration<double, std::milli>(stop - start).count());
    }
    (void)sink;
    report.rows.push_back({scale, matched, best_ms});
  }

  // Least-squares slope of log(time) against log(matched regions).
  if (report.rows.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(report.rows.size());
    for (const BenchRow& row : report.rows) {
      const double x = std::log(static_cast<double>(row.matched_regions));
      const double y = std::log(std::max(row.millis, 1e-9));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

}  // namespace hoi
