#pragma once

#include <cstdint>
#include <vector>

#include "hoi/config.hpp"
#include "hoi/eval.hpp"
#include "hoi/synth.hpp"

namespace hoi {

// Runs voting over every scene of a generated benchmark and evaluates the
// result against its ground truth.
EvalReport evaluate_bundles(const SynthOutput& data, const std::vector<Anchor>& anchors,
                            const VotingConfig& voting, const EvalConfig& eval,
                            const TaskSpec& task);

// Number of regions that survive both matching steps, summed over scenes:
// the population the voting runtime is linear in.
std::size_t count_matched_regions(const SynthOutput& data, const std::vector<Anchor>& anchors,
                                  const VotingConfig& voting, const TaskSpec& task);

// The seeded noisy benchmark used by the ablation and trend suites: moderate
// box jitter, score noise and region dropping on top of the configured scene
// layout.
SynthConfig noisy_benchmark(const SynthConfig& base);

// The full pinned benchmark configuration the trend suites run on: 50 scenes
// with several objects per human, and anchors with four scales per octave so
// the region-NMS sweep has suppression work to do at every threshold.
RunConfig benchmark_config();

struct NmsSweepRow {
  double nms_iou;  // >= 1.0 disables suppression
  double map_role;
};
std::vector<NmsSweepRow> ablate_nms(const RunConfig& cfg, std::uint64_t seed,
                                    const std::vector<double>& nms_ious);

struct SigmaSweepRow {
  double sigma;
  double map_role;
};
std::vector<SigmaSweepRow> ablate_sigma(const RunConfig& cfg, std::uint64_t seed,
                                        const std::vector<double>& sigmas);

struct ThresholdSweepRow {
  Thresholds thresholds;
  double map_role;
  std::size_t flagged_pairs;
};
std::vector<ThresholdSweepRow> ablate_thresholds(const RunConfig& cfg, std::uint64_t seed,
                                                 const std::vector<Thresholds>& settings);

struct LossVariantRow {
  LossVariant variant;
  double value;
  double max_fd_rel_err;  // sampled central finite differences
};
std::vector<LossVariantRow> ablate_loss_variants(const RunConfig& cfg, std::uint64_t seed);

struct BenchRow {
  int scale;
  std::size_t matched_regions;
  double millis;
};
struct BenchReport {
  std::vector<BenchRow> rows;
  double loglog_slope = 0.0;
};

// Duplicates each scene's regions by the given factors and times full voting
// runs (best of `repeats`), then fits the log-log slope of time against the
// matched-region count.
BenchReport bench_voting(const RunConfig& cfg, std::uint64_t seed,
                         const std::vector<int>& scales, int repeats = 5);

}  // namespace hoi
